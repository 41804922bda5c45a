#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "dare/corpus/dataset.hpp"
#include "dare/nn/checkpoint.hpp"
#include "dare/nn/train.hpp"

using namespace dare;
using namespace dare::nn;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("dare-ckpt-test-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ModelConfig tiny_config(std::uint64_t seed) {
    ModelConfig cfg = ModelConfig::defaults(SequenceFormat::ddmyy(), seed);
    cfg.input_height = 32;
    cfg.input_width = 64;
    cfg.conv_blocks = {{6, 3, 2}, {8, 3, 2}};
    cfg.feature_dim = 16;
    return cfg;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, const std::string& bytes) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("save/load round-trips the model bit for bit") {
    TempDir tmp;
    const Model m = make_model(tiny_config(77));
    const fs::path a = tmp.path / "a.ckpt";
    const fs::path b = tmp.path / "b.ckpt";
    save_checkpoint(m, a);

    const Model loaded = load_checkpoint(a);
    CHECK(loaded.config == m.config);

    // Re-saving the loaded model writes identical bytes.
    save_checkpoint(loaded, b);
    CHECK(read_file(a) == read_file(b));

    // And the two models predict identically.
    corpus::CorpusParams p;
    p.count = 3;
    p.format = SequenceFormat::ddmyy();
    p.height = 32;
    p.width = 64;
    p.seed = 5;
    const auto ds = corpus::generate_dataset(p);
    for (const auto& item : ds.items) {
        const auto pa = predict(m, to_float(item.image));
        const auto pb = predict(loaded, to_float(item.image));
        CHECK(pa.argmax == pb.argmax);
        CHECK(pa.confidence == pb.confidence);
    }
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_checkpoint("/definitely/not/here.ckpt"), MissingFileError);
}

TEST_CASE("bad magic") {
    TempDir tmp;
    const fs::path p = tmp.path / "bad.ckpt";
    write_file(p, "NOPExx rest of the file");
    CHECK_THROWS_AS(load_checkpoint(p), BadMagicError);
}

TEST_CASE("version mismatch") {
    TempDir tmp;
    const Model m = make_model(tiny_config(1));
    const fs::path p = tmp.path / "v9.ckpt";
    save_checkpoint(m, p);
    std::string bytes = read_file(p);
    bytes[4] = 'v';
    bytes[5] = '9';
    write_file(p, bytes);
    CHECK_THROWS_AS(load_checkpoint(p), VersionMismatchError);
}

TEST_CASE("truncation at every region") {
    TempDir tmp;
    const Model m = make_model(tiny_config(2));
    const fs::path full = tmp.path / "full.ckpt";
    save_checkpoint(m, full);
    const std::string bytes = read_file(full);

    const fs::path cut = tmp.path / "cut.ckpt";
    // In the magic, in the header, in the config, in the tensor data.
    for (const std::size_t keep :
         {std::size_t{3}, std::size_t{8}, std::size_t{20}, bytes.size() - 5}) {
        write_file(cut, bytes.substr(0, keep));
        CHECK_THROWS_AS(load_checkpoint(cut), TruncatedError);
    }
}

TEST_CASE("trailing bytes are rejected") {
    TempDir tmp;
    const Model m = make_model(tiny_config(3));
    const fs::path p = tmp.path / "trail.ckpt";
    save_checkpoint(m, p);
    std::string bytes = read_file(p);
    bytes += "junk";
    write_file(p, bytes);
    CHECK_THROWS(load_checkpoint(p));
    try {
        load_checkpoint(p);
    } catch (const TruncatedError&) {
        FAIL("trailing bytes misreported as truncation");
    } catch (const CheckpointError&) {
        // expected
    }
}

TEST_CASE("corrupt config json") {
    TempDir tmp;
    const Model m = make_model(tiny_config(4));
    const fs::path p = tmp.path / "corrupt.ckpt";
    save_checkpoint(m, p);
    std::string bytes = read_file(p);
    bytes[12] = '@';   // inside the JSON blob
    write_file(p, bytes);
    CHECK_THROWS_AS(load_checkpoint(p), CheckpointError);
}

TEST_CASE("a checkpoint carries its format") {
    TempDir tmp;
    const Model yy = make_model(tiny_config(5));
    const fs::path p = tmp.path / "yy.ckpt";
    save_checkpoint(yy, p);
    const Model loaded = load_checkpoint(p);
    CHECK(loaded.config.format() == SequenceFormat::ddmyy());
    // Loading into a different head layout is a transfer, which guards the
    // alphabets; an outright different backbone is refused.
    ModelConfig other = tiny_config(6);
    other.conv_blocks = {{4, 3, 2}};
    CHECK_THROWS_AS(transfer_model(loaded, other), ConfigError);
}
