#include "dare/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace dare::nn {
namespace {

constexpr char kMagic[6] = {'D', 'A', 'R', 'E', 'v', '1'};

nlohmann::json config_to_json(const ModelConfig& cfg) {
    nlohmann::json j;
    j["input_height"] = cfg.input_height;
    j["input_width"] = cfg.input_width;
    j["channels"] = cfg.channels;
    j["feature_dim"] = cfg.feature_dim;
    j["dropout_prob"] = cfg.dropout_prob;
    j["seed"] = cfg.seed;
    j["conv_blocks"] = nlohmann::json::array();
    for (const auto& b : cfg.conv_blocks) {
        j["conv_blocks"].push_back({{"filters", b.filters}, {"kernel", b.kernel},
                                    {"stride", b.stride}});
    }
    j["heads"] = nlohmann::json::array();
    for (const auto& h : cfg.heads) {
        j["heads"].push_back({{"name", head_name_string(h.name)}, {"alphabet", h.alphabet},
                              {"smoothing_alpha", h.smoothing_alpha}});
    }
    return j;
}

ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig cfg;
    try {
        cfg.input_height = j.at("input_height").get<int>();
        cfg.input_width = j.at("input_width").get<int>();
        cfg.channels = j.at("channels").get<int>();
        cfg.feature_dim = j.at("feature_dim").get<int>();
        cfg.dropout_prob = j.at("dropout_prob").get<double>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& b : j.at("conv_blocks")) {
            cfg.conv_blocks.push_back({b.at("filters").get<int>(), b.at("kernel").get<int>(),
                                       b.at("stride").get<int>()});
        }
        for (const auto& h : j.at("heads")) {
            HeadSpec spec;
            spec.name = head_name_from_string(h.at("name").get<std::string>());
            spec.alphabet = h.at("alphabet").get<std::vector<std::string>>();
            spec.smoothing_alpha = h.at("smoothing_alpha").get<double>();
            cfg.heads.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("malformed checkpoint config: ") + e.what());
    }
    return cfg;
}

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f32(std::string& out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t read_u32(const std::string& buf, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    }
    return v;
}

}  // namespace

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
    model.config.validate();
    const std::string config = config_to_json(model.config).dump();

    std::string out;
    out.append(kMagic, sizeof(kMagic));
    append_u32(out, static_cast<std::uint32_t>(config.size()));
    out += config;
    model.net.params.for_each([&](const Tensor<float>& t) {
        for (const float v : t.data) append_f32(out, v);
    });

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open checkpoint for writing: " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("failed writing checkpoint: " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw MissingFileError("checkpoint not found: " + path.string());
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    if (buf.size() < sizeof(kMagic)) throw TruncatedError("checkpoint shorter than its magic");
    if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
        if (std::memcmp(buf.data(), kMagic, 4) == 0) {
            throw VersionMismatchError("unsupported checkpoint version: " + buf.substr(4, 2));
        }
        throw BadMagicError("not a checkpoint file: " + path.string());
    }

    std::size_t pos = sizeof(kMagic);
    if (buf.size() < pos + 4) throw TruncatedError("checkpoint truncated in header");
    const std::uint32_t config_len = read_u32(buf, pos);
    pos += 4;
    if (buf.size() < pos + config_len) throw TruncatedError("checkpoint truncated in config");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.substr(pos, config_len));
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("checkpoint config is not valid JSON: ") + e.what());
    }
    pos += config_len;

    Model model;
    model.config = config_from_json(j);
    model.config.validate();
    model.net.shape = model.config.net_shape();
    model.net.params = make_params<float>(model.net.shape);

    std::size_t expected = 0;
    model.net.params.for_each([&](const Tensor<float>& t) { expected += t.size() * 4; });
    if (buf.size() < pos + expected) throw TruncatedError("checkpoint truncated in tensor data");
    if (buf.size() > pos + expected) {
        throw CheckpointError("checkpoint has trailing bytes after tensor data");
    }

    model.net.params.for_each([&](Tensor<float>& t) {
        for (float& v : t.data) {
            std::uint32_t bits = 0;
            for (int i = 0; i < 4; ++i) {
                bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i]))
                        << (8 * i);
            }
            v = std::bit_cast<float>(bits);
            pos += 4;
        }
    });
    return model;
}

}  // namespace dare::nn
