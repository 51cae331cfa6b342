#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "storygraph/aligner.hpp"
#include "storygraph/communities.hpp"
#include "storygraph/graph.hpp"
#include "storygraph/script.hpp"
#include "storygraph/subtitles.hpp"

namespace storygraph::io {

std::string read_file(const std::filesystem::path& path);  // throws ImportError
void write_file(const std::filesystem::path& path, std::string_view content);

std::string scenes_to_json(const std::vector<script::Scene>& scenes);
std::vector<script::Scene> scenes_from_json(std::string_view text);

std::string subtitles_to_json(const subtitles::SrtParseResult& srt);
std::vector<subtitles::SubtitleBlock> subtitles_from_json(std::string_view text);

std::string timeline_to_json(const align::Timeline& timeline);
align::Timeline timeline_from_json(std::string_view text);

align::ShotList shots_from_json(std::string_view text);

struct GraphHeader {
  std::uint64_t seed = 0;
};

std::string graph_to_json(const graph::MultilayerGraph& g, const GraphHeader& header = {});
graph::MultilayerGraph graph_from_json(std::string_view text);

std::string partition_to_json(const graph::MultilayerGraph& g, const communities::Partition& p,
                              double resolution = 1.0);

std::string to_gexf(const graph::MultilayerGraph& g);
graph::MultilayerGraph from_gexf(std::string_view text);
std::string to_graphml(const graph::MultilayerGraph& g);
graph::MultilayerGraph from_graphml(std::string_view text);

// Loads a network in any supported format (by extension: .json, .gexf,
// .graphml). Nodes must carry a layer tag; edge families are derived from the
// endpoint layers and checked against a declared family when present.
graph::MultilayerGraph import_released_dataset(const std::filesystem::path& path);

}  // namespace storygraph::io
