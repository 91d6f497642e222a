#pragma once

#include <string>

#include "steiner/instance.hpp"

namespace steiner {

class ParseError : public GraphError {
public:
    ParseError(int line, const std::string& what)
        : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// SteinLib STP text format. Node ids are 1-based on disk, 0-based in the
// instance model. "E u v" lines without a weight mean weight 1. Coordinate
// sections are skipped; STP instances are treated as non-geometric.
SteinerInstance parse_stp(const std::string& text, const std::string& id = {});

std::string serialize_stp(const SteinerInstance& instance);

}  // namespace steiner
