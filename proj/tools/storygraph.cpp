#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "storygraph/aligner.hpp"
#include "storygraph/annotations.hpp"
#include "storygraph/captions.hpp"
#include "storygraph/communities.hpp"
#include "storygraph/error.hpp"
#include "storygraph/graph.hpp"
#include "storygraph/io.hpp"
#include "storygraph/metrics.hpp"
#include "storygraph/script.hpp"
#include "storygraph/subtitles.hpp"

namespace fs = std::filesystem;
using namespace storygraph;

namespace {

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kMissingInput = 3,
  kParse = 4,
  kSchema = 5,
  kAlignment = 6,
  kBuild = 7,
  kConvergence = 8,
};

struct Config {
  std::string script, srt, shots, faces, captions, entities, stopwords;
  std::string scenes, timeline, input, out;
  std::string out_dir = ".";
  double cosine_threshold = 0.3;
  std::size_t caption_top_k = captions::kDefaultTopK;
  std::size_t keyword_top_k = 10;
  double eigen_tol = 1e-8;
  std::size_t eigen_max_iter = 1000;
  std::uint64_t seed = 42;
  double resolution = 1.0;
  bool raw_captions = false;
  bool mention_presence = false;
  bool whole_scene = false;

  // analyze / communities / export
  std::string view = "ALL";
  std::string layer;
  std::optional<std::size_t> top;
  bool topology = false;
  std::string format = "gexf";
};

void require(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("missing required input --") + what);
  if (!fs::exists(path)) throw ImportError(std::string("input not found: ") + what + "=" + path);
}

fs::path output_path(const Config& c, const std::string& default_name) {
  if (!c.out.empty()) return c.out;
  return fs::path(c.out_dir) / default_name;
}

void emit(const Config& c, const std::string& default_name, const std::string& content) {
  if (c.out == "-") {
    std::cout << content;
    return;
  }
  const auto path = output_path(c, default_name);
  io::write_file(path, content);
  std::cerr << "wrote " << path.string() << "\n";
}

text::Stoplist stoplist(const Config& c) {
  if (c.stopwords.empty()) return text::Stoplist::english();
  require(c.stopwords, "stopwords");
  return text::Stoplist::load(c.stopwords);
}

std::vector<script::Scene> load_scenes(const Config& c) {
  if (!c.scenes.empty()) {
    require(c.scenes, "scenes");
    return io::scenes_from_json(io::read_file(c.scenes));
  }
  require(c.script, "script");
  return script::chunk_scenes(io::read_file(c.script));
}

align::Timeline run_align(const Config& c, const std::vector<script::Scene>& scenes) {
  require(c.srt, "srt");
  auto srt = subtitles::parse_srt(io::read_file(c.srt));
  for (const auto& w : srt.warnings) std::cerr << "warning: " << w << "\n";
  align::ShotList shots;
  if (!c.shots.empty()) {
    require(c.shots, "shots");
    shots = io::shots_from_json(io::read_file(c.shots));
  }
  align::AlignOptions opts;
  opts.cosine_threshold = c.cosine_threshold;
  return align::align(scenes, srt.blocks, shots, opts, stoplist(c));
}

graph::MultilayerGraph run_build(const Config& c, const std::vector<script::Scene>& scenes,
                                 const align::Timeline& timeline) {
  annotations::EntityDictionary dict;
  if (!c.entities.empty()) {
    require(c.entities, "entities");
    dict = annotations::parse_entities(io::read_file(c.entities));
  }
  if (!c.faces.empty()) require(c.faces, "faces");
  if (!c.captions.empty()) require(c.captions, "captions");
  const auto ann = annotations::load_annotations(c.faces, c.captions);
  const auto stops = stoplist(c);

  annotations::BundleOptions bopts;
  bopts.keywords.top_k = c.keyword_top_k;
  bopts.mention_presence = c.mention_presence;
  bopts.conversation_mode = c.whole_scene ? script::ConversationMode::WholeScene : script::ConversationMode::AdjacentRuns;
  auto result = annotations::bundle_by_scene(timeline, scenes, ann.faces, ann.captions, dict, stops, bopts);
  if (result.dropped_faces || result.dropped_captions)
    std::cerr << "dropped " << result.dropped_faces << " faces and " << result.dropped_captions
              << " captions outside the timeline\n";

  captions::CaptionOptions copts;
  copts.top_k = c.caption_top_k;
  copts.identity = c.raw_captions ? captions::CaptionIdentity::RawSentence : captions::CaptionIdentity::SortedBag;
  captions::select_captions(result.bundles, stops, copts);

  graph::BuildOptions gopts;
  gopts.scene_count = timeline.entries.size();
  return graph::build(result.bundles, gopts);
}

graph::MultilayerGraph load_graph(const Config& c) {
  require(c.input, "input");
  return io::import_released_dataset(c.input);
}

graph::MultilayerGraph select_view(const Config& c, const graph::MultilayerGraph& g) {
  return graph::view(g, c.layer.empty() ? c.view : c.layer);
}

std::string influence_csv(const Config& c, const graph::MultilayerGraph& g) {
  std::ostringstream out;
  out << "# seed=" << c.seed << "\n";
  metrics::write_influence_csv(out, metrics::influence_scores(g, {c.eigen_tol, c.eigen_max_iter}), c.top);
  return out.str();
}

std::string topology_csv(const Config& c, const graph::MultilayerGraph& g) {
  std::vector<std::pair<std::string, metrics::TopologyStats>> rows;
  rows.emplace_back("ALL", metrics::topology(g));
  rows.emplace_back("ALL_MINUS_CAPTIONS", metrics::topology(graph::drop_layer(g, graph::LayerKind::Caption)));
  for (auto f : graph::kFamilies) rows.emplace_back(graph::family_name(f), metrics::topology(graph::layer_subgraph(g, f)));
  std::ostringstream out;
  out << "# seed=" << c.seed << "\n";
  metrics::write_topology_csv(out, rows);
  return out.str();
}

void log_counts(const graph::MultilayerGraph& g) {
  std::cerr << "nodes " << g.node_count() << " (";
  for (auto l : graph::kLayers) std::cerr << " " << graph::layer_tag(l) << "=" << g.count_nodes(l);
  std::cerr << " ) edges " << g.edge_count() << " (";
  for (auto f : graph::kFamilies)
    if (auto n = g.count_edges(f)) std::cerr << " " << graph::family_name(f) << "=" << n;
  std::cerr << " )\n";
}

std::string export_as(const std::string& format, const graph::MultilayerGraph& g, std::uint64_t seed) {
  if (format == "gexf") return io::to_gexf(g);
  if (format == "graphml") return io::to_graphml(g);
  if (format == "json") return io::graph_to_json(g, {seed});
  throw ConfigError("unknown export format '" + format + "'");
}

std::string escape_line(std::string s) {
  for (auto& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

int fail(const char* kind, int code, const std::string& msg) {
  std::cerr << "error kind=" << kind << " exit=" << code << " message=\"" << escape_line(msg) << "\"\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and analyse multilayer story graphs from screenplays, subtitles and video annotations"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");
  Config c;

  app.add_option("--script", c.script, "Screenplay text file");
  app.add_option("--srt", c.srt, "SubRip subtitle file");
  app.add_option("--shots", c.shots, "Shot boundaries JSON");
  app.add_option("--faces", c.faces, "Face observations JSON");
  app.add_option("--captions", c.captions, "Dense caption observations JSON");
  app.add_option("--entities", c.entities, "Entity dictionary JSON");
  app.add_option("--stopwords", c.stopwords, "Stopword list (one term per line)");
  app.add_option("--scenes", c.scenes, "Scenes JSON (from parse)");
  app.add_option("--timeline", c.timeline, "Timeline JSON (from align)");
  app.add_option("--input", c.input, "Graph file (.json, .gexf, .graphml)");
  app.add_option("--out", c.out, "Output file, '-' for stdout");
  app.add_option("--out-dir", c.out_dir, "Directory for default output names")->envname("STORYGRAPH_OUT_DIR");
  app.add_option("--cosine-threshold", c.cosine_threshold)->check(CLI::Range(0.0, 1.0));
  app.add_option("--caption-top-k", c.caption_top_k)->check(CLI::PositiveNumber);
  app.add_option("--keyword-top-k", c.keyword_top_k)->check(CLI::PositiveNumber);
  app.add_option("--eigen-tol", c.eigen_tol)->check(CLI::PositiveNumber);
  app.add_option("--eigen-max-iter", c.eigen_max_iter)->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed);
  app.add_option("--resolution", c.resolution)->check(CLI::PositiveNumber);
  app.add_flag("--raw-captions", c.raw_captions, "Score whole caption sentences instead of 4-gram bags");
  app.add_flag("--mention-presence", c.mention_presence, "Count description mentions as character presence");
  app.add_flag("--whole-scene", c.whole_scene, "One conversation per scene");
  app.add_option("--graph", c.view, "Graph view: ALL, ALL_MINUS_CAPTIONS or an edge family");
  app.add_option("--layer", c.layer, "Edge family view, e.g. CC");
  app.add_option("--top", c.top, "Rows to keep");
  app.add_flag("--topology", c.topology, "Write the topology table instead of the influence ranking");
  app.add_option("--format", c.format, "Export format")->check(CLI::IsMember({"gexf", "graphml", "json"}));

  auto* parse = app.add_subcommand("parse", "Split a screenplay into scenes JSON");
  auto* align_cmd = app.add_subcommand("align", "Align scenes to subtitles and write the timeline JSON");
  auto* build = app.add_subcommand("build", "Build the multilayer graph JSON");
  auto* analyze = app.add_subcommand("analyze", "Influence ranking or topology CSV");
  auto* comm = app.add_subcommand("communities", "Louvain communities as partition JSON");
  auto* exp = app.add_subcommand("export", "Convert a graph to GEXF, GraphML or JSON");
  auto* imp = app.add_subcommand("import", "Load a released network and write graph JSON");
  auto* pipeline = app.add_subcommand("pipeline", "parse, align, build, analyze, communities and export in one go");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", kUsage, e.what());
  }

  try {
    if (*parse) {
      require(c.script, "script");
      emit(c, "scenes.json", io::scenes_to_json(script::chunk_scenes(io::read_file(c.script))));
    } else if (*align_cmd) {
      const auto scenes = load_scenes(c);
      const auto tl = run_align(c, scenes);
      std::cerr << align::alignment_report(tl);
      emit(c, "timeline.json", io::timeline_to_json(tl));
    } else if (*build) {
      const auto scenes = load_scenes(c);
      align::Timeline tl;
      if (!c.timeline.empty()) {
        require(c.timeline, "timeline");
        tl = io::timeline_from_json(io::read_file(c.timeline));
      } else {
        tl = run_align(c, scenes);
      }
      const auto g = run_build(c, scenes, tl);
      log_counts(g);
      emit(c, "graph.json", io::graph_to_json(g, {c.seed}));
    } else if (*analyze) {
      const auto g = load_graph(c);
      if (c.topology)
        emit(c, "topology.csv", topology_csv(c, g));
      else
        emit(c, "influence.csv", influence_csv(c, select_view(c, g)));
    } else if (*comm) {
      const auto g = select_view(c, load_graph(c));
      const auto p = communities::louvain(g, {c.resolution, c.seed});
      std::ostringstream report;
      communities::write_community_report(report, communities::community_report(g, p));
      std::cerr << "modularity " << p.modularity << " communities " << p.community_count() << "\n" << report.str();
      emit(c, "partition.json", io::partition_to_json(g, p, c.resolution));
    } else if (*exp) {
      const auto g = load_graph(c);
      emit(c, "graph." + c.format, export_as(c.format, g, c.seed));
    } else if (*imp) {
      const auto g = load_graph(c);
      log_counts(g);
      emit(c, "graph.json", io::graph_to_json(g, {c.seed}));
    } else if (*pipeline) {
      if (!c.out.empty()) throw ConfigError("pipeline writes several files; use --out-dir");
      require(c.script, "script");
      const auto scenes = script::chunk_scenes(io::read_file(c.script));
      emit(c, "scenes.json", io::scenes_to_json(scenes));
      const auto tl = run_align(c, scenes);
      emit(c, "alignment.txt", align::alignment_report(tl));
      emit(c, "timeline.json", io::timeline_to_json(tl));
      const auto g = run_build(c, scenes, tl);
      log_counts(g);
      emit(c, "graph.json", io::graph_to_json(g, {c.seed}));
      emit(c, "graph.gexf", io::to_gexf(g));
      emit(c, "topology.csv", topology_csv(c, g));
      emit(c, "influence_ALL.csv", influence_csv(c, g));
      const auto g2 = graph::drop_layer(g, graph::LayerKind::Caption);
      emit(c, "influence_ALL_MINUS_CAPTIONS.csv", influence_csv(c, g2));
      emit(c, "influence_CC.csv", influence_csv(c, graph::layer_subgraph(g, graph::EdgeFamily::CC)));
      const auto p = communities::louvain(g2, {c.resolution, c.seed});
      emit(c, "partition.json", io::partition_to_json(g2, p, c.resolution));
    }
  } catch (const ConvergenceError& e) {
    return fail("convergence", kConvergence, std::string(e.what()) + " residual=" + std::to_string(e.residual()));
  } catch (const ImportError& e) {
    return fail("input", kMissingInput, e.what());
  } catch (const ParseError& e) {
    return fail("parse", kParse, e.what());
  } catch (const ValidationError& e) {
    return fail("schema", kSchema, e.what());
  } catch (const AlignmentError& e) {
    return fail("alignment", kAlignment, e.what());
  } catch (const BuildError& e) {
    return fail("build", kBuild, e.what());
  } catch (const ConfigError& e) {
    return fail("config", kUsage, e.what());
  } catch (const std::exception& e) {
    return fail("internal", kInternal, e.what());
  }
  return kOk;
}
