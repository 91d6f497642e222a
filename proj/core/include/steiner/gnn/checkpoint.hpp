#pragma once

#include <stdexcept>
#include <string>

#include "steiner/gnn/model.hpp"

namespace steiner::gnn {

class CheckpointError : public std::runtime_error {
public:
    explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

// Versioned JSON container: config, every trainable tensor, batch-norm
// running statistics and the optimizer moments, each stored with its shape.
// Doubles use shortest round-trip formatting, so load(save(m)) restores
// every value bit-exactly.
std::string save_checkpoint(const GnnModel& model);
GnnModel load_checkpoint(const std::string& payload);

void save_checkpoint_file(const GnnModel& model, const std::string& path);
GnnModel load_checkpoint_file(const std::string& path);

}  // namespace steiner::gnn
