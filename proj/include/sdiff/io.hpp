#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "sdiff/network.hpp"
#include "sdiff/treewidth.hpp"

namespace sdiff {

// Network JSON:  {"n", "external"?, "edges": [{"u","v","wuv","wvu"}]}
// Network text:  "n m" then m lines "u v wuv wvu"
// Instance JSON: network JSON plus "seed", "z", "alpha"?, "beta"?
// Decomposition: JSON {"root", "bags", "edges"} or PACE .td text.

nlohmann::json network_to_json(const InfluenceNetwork& net);
InfluenceNetwork network_from_json(const nlohmann::json& j);

std::string network_to_text(const InfluenceNetwork& net);
InfluenceNetwork network_from_text(std::istream& in);

nlohmann::json instance_to_json(const DiffusionInstance& instance);
DiffusionInstance instance_from_json(const nlohmann::json& j);

nlohmann::json decomposition_to_json(const TreeDecomposition& td);
TreeDecomposition decomposition_from_json(const nlohmann::json& j);

/// PACE .td: 1-based bag and node ids; the first bag becomes the root.
std::string decomposition_to_pace(const TreeDecomposition& td, std::size_t node_count);
TreeDecomposition decomposition_from_pace(std::istream& in);

/// Infinite times are written as null and read back as +inf.
nlohmann::json result_to_json(const SolveResult& result);
SolveResult result_from_json(const nlohmann::json& j);

/// Format is chosen by extension: ".json" is JSON, anything else text.
InfluenceNetwork load_network(const std::filesystem::path& path);
void save_network(const InfluenceNetwork& net, const std::filesystem::path& path);

DiffusionInstance load_instance(const std::filesystem::path& path);
void save_instance(const DiffusionInstance& instance, const std::filesystem::path& path);

/// ".json" is JSON, anything else PACE .td.
TreeDecomposition load_decomposition(const std::filesystem::path& path);
void save_decomposition(const TreeDecomposition& td, std::size_t node_count, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace sdiff
