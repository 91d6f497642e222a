#pragma once

#include <string>

#include "steiner/instance.hpp"

namespace steiner {

// Instance JSON: {"id", "n", "edges": [[u,v,w],...], "terminals": [...],
// "coords": [[x,y],...] | null}. Field order is fixed so serialized files
// are byte-stable for golden comparisons.
std::string instance_to_json(const SteinerInstance& instance);
SteinerInstance instance_from_json(const std::string& text);

// Solution JSON: {"cost", "edges": [[u,v],...], "runtime_ms"}.
std::string solution_to_json(const SteinerTree& tree, double runtime_ms);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace steiner
