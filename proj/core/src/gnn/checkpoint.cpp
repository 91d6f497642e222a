#include "steiner/gnn/checkpoint.hpp"

#include <cmath>

#include <json.hpp>

#include "steiner/json_io.hpp"

namespace steiner::gnn {

namespace {

constexpr const char* kFormat = "segnn-checkpoint";
constexpr int kVersion = 1;

using ordered_json = nlohmann::ordered_json;

ordered_json tensor_to_json(const Matrix& m) {
    for (const double v : m.data) {
        if (!std::isfinite(v)) throw CheckpointError("refusing to save non-finite tensor value");
    }
    ordered_json j;
    j["shape"] = {m.rows, m.cols};
    j["data"] = m.data;
    return j;
}

void tensor_from_json(const ordered_json& j, const std::string& name, Matrix& out) {
    if (!j.contains("shape") || !j.contains("data")) {
        throw CheckpointError("tensor " + name + " is missing shape or data");
    }
    const int rows = j["shape"].at(0).get<int>();
    const int cols = j["shape"].at(1).get<int>();
    if (rows != out.rows || cols != out.cols) {
        throw CheckpointError("tensor " + name + " has shape " + std::to_string(rows) + "x" +
                              std::to_string(cols) + ", expected " + std::to_string(out.rows) +
                              "x" + std::to_string(out.cols));
    }
    const auto& data = j["data"];
    if (data.size() != out.data.size()) {
        throw CheckpointError("tensor " + name + " has wrong element count");
    }
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        if (!data[i].is_number()) throw CheckpointError("tensor " + name + " has non-numeric entry");
        out.data[i] = data[i].get<double>();
    }
}

ordered_json config_to_json(const ModelConfig& c) {
    ordered_json j;
    j["input_dim"] = c.input_dim;
    j["embed_dim"] = c.embed_dim;
    j["edge_dim"] = c.edge_dim;
    j["layers"] = c.layers;
    j["learning_rate"] = c.learning_rate;
    j["adam_beta1"] = c.adam_beta1;
    j["adam_beta2"] = c.adam_beta2;
    j["adam_eps"] = c.adam_eps;
    j["bn_momentum"] = c.bn_momentum;
    j["bn_eps"] = c.bn_eps;
    j["batch_size"] = c.batch_size;
    j["patience"] = c.patience;
    return j;
}

ModelConfig config_from_json(const ordered_json& j) {
    ModelConfig c;
    c.input_dim = j.at("input_dim").get<int>();
    c.embed_dim = j.at("embed_dim").get<int>();
    c.edge_dim = j.at("edge_dim").get<int>();
    c.layers = j.at("layers").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.adam_beta1 = j.at("adam_beta1").get<double>();
    c.adam_beta2 = j.at("adam_beta2").get<double>();
    c.adam_eps = j.at("adam_eps").get<double>();
    c.bn_momentum = j.at("bn_momentum").get<double>();
    c.bn_eps = j.at("bn_eps").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.patience = j.at("patience").get<int>();
    return c;
}

}  // namespace

std::string save_checkpoint(const GnnModel& model) {
    ordered_json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["config"] = config_to_json(model.config());
    j["init_seed"] = model.init_seed();
    j["adam_step"] = model.adam_state().step;

    // The registry hands out non-const refs; serialization only reads.
    GnnModel& m = const_cast<GnnModel&>(model);
    ordered_json tensors = ordered_json::object();
    for (const auto& ref : m.parameters()) tensors[ref.name] = tensor_to_json(*ref.tensor);
    for (const auto& ref : m.running_stats()) tensors[ref.name] = tensor_to_json(*ref.tensor);
    j["tensors"] = tensors;

    ordered_json adam_m = ordered_json::object();
    ordered_json adam_v = ordered_json::object();
    const auto refs = m.parameters();
    for (std::size_t i = 0; i < refs.size(); ++i) {
        adam_m[refs[i].name] = tensor_to_json(model.adam_state().m[i]);
        adam_v[refs[i].name] = tensor_to_json(model.adam_state().v[i]);
    }
    j["adam_m"] = adam_m;
    j["adam_v"] = adam_v;
    return j.dump() + "\n";
}

GnnModel load_checkpoint(const std::string& payload) {
    ordered_json j;
    try {
        j = ordered_json::parse(payload);
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("corrupt checkpoint payload: ") + e.what());
    }
    try {
        if (!j.contains("format") || j["format"].get<std::string>() != kFormat) {
            throw CheckpointError("not a model checkpoint");
        }
        if (j.at("version").get<int>() != kVersion) {
            throw CheckpointError("unsupported checkpoint version " +
                                  j.at("version").dump());
        }
        const ModelConfig config = config_from_json(j.at("config"));
        GnnModel model = model_for_checkpoint(config, j.at("init_seed").get<std::uint64_t>());
        model.adam_state().step = j.at("adam_step").get<std::int64_t>();

        const auto& tensors = j.at("tensors");
        for (const auto& ref : model.parameters()) {
            if (!tensors.contains(ref.name)) {
                throw CheckpointError("checkpoint is missing tensor " + ref.name);
            }
            tensor_from_json(tensors[ref.name], ref.name, *ref.tensor);
        }
        for (const auto& ref : model.running_stats()) {
            if (!tensors.contains(ref.name)) {
                throw CheckpointError("checkpoint is missing tensor " + ref.name);
            }
            tensor_from_json(tensors[ref.name], ref.name, *ref.tensor);
        }
        const auto refs = model.parameters();
        for (std::size_t i = 0; i < refs.size(); ++i) {
            tensor_from_json(j.at("adam_m").at(refs[i].name), refs[i].name,
                             model.adam_state().m[i]);
            tensor_from_json(j.at("adam_v").at(refs[i].name), refs[i].name,
                             model.adam_state().v[i]);
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("corrupt checkpoint payload: ") + e.what());
    }
}

void save_checkpoint_file(const GnnModel& model, const std::string& path) {
    write_text_file(path, save_checkpoint(model));
}

GnnModel load_checkpoint_file(const std::string& path) {
    return load_checkpoint(read_text_file(path));
}

}  // namespace steiner::gnn
