#pragma once

#include "advflow/netgraph.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace advflow::testing {

inline std::string data_path(const std::string& rel) { return std::string(ADVFLOW_DATA_DIR) + "/" + rel; }

inline Network graph(const std::string& name) { return load_network(data_path("graphs/" + name + ".graph")); }

/// Every bundled graph, by stem, sorted.
inline std::vector<std::string> corpus() {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(data_path("graphs")))
    if (entry.path().extension() == ".graph") out.push_back(entry.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline NodeSet nodes(const Network& net, std::initializer_list<const char*> names) {
  NodeSet out;
  for (const char* n : names) out.push_back(*net.find(n));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace advflow::testing
