// dare: synthesise date corpora, train/evaluate the sequence models,
// transcribe images, plot confidence-coverage curves, and run the linking
// pipeline. Every command reads an optional JSON config (flags override file
// values), writes its outputs plus a resolved_config.json into --out, and is
// deterministic for fixed seeds.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dare/corpus/dataset.hpp"
#include "dare/corpus/image_io.hpp"
#include "dare/csv.hpp"
#include "dare/error.hpp"
#include "dare/link/census.hpp"
#include "dare/metrics.hpp"
#include "dare/nn/checkpoint.hpp"
#include "dare/nn/train.hpp"
#include "dare/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dare;

namespace {

// --- config plumbing --------------------------------------------------------

json load_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFileError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    return j;
}

// Rejects keys outside the documented schema, listing every offender.
void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
    std::vector<std::string> unknown;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            unknown.push_back(it.key());
        }
    }
    if (unknown.empty()) return;
    std::string msg = "unknown config key(s) in " + where + ":";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

corpus::StyleParams parse_style(const json& j) {
    check_keys(j,
               {"glyph_jitter", "stroke_min", "stroke_max", "slant_deg", "noise_level",
                "fade_level", "blot_prob", "layout", "month_style"},
               "style");
    corpus::StyleParams s;
    read_key(j, "glyph_jitter", s.glyph_jitter);
    read_key(j, "stroke_min", s.stroke_min);
    read_key(j, "stroke_max", s.stroke_max);
    read_key(j, "slant_deg", s.slant_deg);
    read_key(j, "noise_level", s.noise_level);
    read_key(j, "fade_level", s.fade_level);
    read_key(j, "blot_prob", s.blot_prob);
    if (j.contains("layout")) {
        const std::string v = j.at("layout").get<std::string>();
        if (v == "day-month-year") s.layout = corpus::DateLayout::DayMonthYear;
        else if (v == "year-day-month") s.layout = corpus::DateLayout::YearDayMonth;
        else throw ConfigError("style.layout must be day-month-year or year-day-month");
    }
    if (j.contains("month_style")) {
        const std::string v = j.at("month_style").get<std::string>();
        if (v == "numeric") s.month_style = corpus::MonthStyle::Numeric;
        else if (v == "text") s.month_style = corpus::MonthStyle::Text;
        else throw ConfigError("style.month_style must be numeric or text");
    }
    return s;
}

json style_json(const corpus::StyleParams& s) {
    return json{
        {"glyph_jitter", s.glyph_jitter},
        {"stroke_min", s.stroke_min},
        {"stroke_max", s.stroke_max},
        {"slant_deg", s.slant_deg},
        {"noise_level", s.noise_level},
        {"fade_level", s.fade_level},
        {"blot_prob", s.blot_prob},
        {"layout", s.layout == corpus::DateLayout::DayMonthYear ? "day-month-year"
                                                                : "year-day-month"},
        {"month_style", s.month_style == corpus::MonthStyle::Numeric ? "numeric" : "text"},
    };
}

void parse_train_section(const json& j, nn::TrainConfig& t) {
    check_keys(j,
               {"batch_size", "lr_max", "momentum", "epochs", "warmup_epochs", "grad_clip_value",
                "weight_decay", "label_smoothing", "random_erase_prob", "seed"},
               "train");
    read_key(j, "batch_size", t.batch_size);
    read_key(j, "lr_max", t.lr_max);
    read_key(j, "momentum", t.momentum);
    read_key(j, "epochs", t.epochs);
    read_key(j, "warmup_epochs", t.warmup_epochs);
    read_key(j, "grad_clip_value", t.grad_clip_value);
    read_key(j, "weight_decay", t.weight_decay);
    read_key(j, "label_smoothing", t.label_smoothing);
    read_key(j, "random_erase_prob", t.random_erase_prob);
    read_key(j, "seed", t.seed);
}

json train_json(const nn::TrainConfig& t) {
    return json{
        {"batch_size", t.batch_size},
        {"lr_max", t.lr_max},
        {"momentum", t.momentum},
        {"epochs", t.epochs},
        {"warmup_epochs", t.warmup_epochs},
        {"grad_clip_value", t.grad_clip_value},
        {"weight_decay", t.weight_decay},
        {"label_smoothing", t.label_smoothing},
        {"random_erase_prob", t.random_erase_prob},
        {"seed", t.seed},
    };
}

void parse_model_section(const json& j, nn::ModelConfig& m) {
    check_keys(j,
               {"input_height", "input_width", "conv_blocks", "feature_dim", "dropout_prob",
                "seed"},
               "model");
    read_key(j, "input_height", m.input_height);
    read_key(j, "input_width", m.input_width);
    read_key(j, "feature_dim", m.feature_dim);
    read_key(j, "dropout_prob", m.dropout_prob);
    read_key(j, "seed", m.seed);
    if (j.contains("conv_blocks")) {
        m.conv_blocks.clear();
        for (const auto& b : j.at("conv_blocks")) {
            nn::ConvBlockSpec spec;
            if (b.is_number_integer()) {
                spec.filters = b.get<int>();
            } else if (b.is_array() && b.size() == 3) {
                spec.filters = b.at(0).get<int>();
                spec.kernel = b.at(1).get<int>();
                spec.stride = b.at(2).get<int>();
            } else {
                throw ConfigError(
                    "model.conv_blocks entries must be a filter count or [filters, kernel, "
                    "stride]");
            }
            m.conv_blocks.push_back(spec);
        }
    }
}

json model_json(const nn::ModelConfig& m) {
    json blocks = json::array();
    for (const auto& b : m.conv_blocks) blocks.push_back({b.filters, b.kernel, b.stride});
    return json{
        {"input_height", m.input_height}, {"input_width", m.input_width},
        {"conv_blocks", blocks},          {"feature_dim", m.feature_dim},
        {"dropout_prob", m.dropout_prob}, {"seed", m.seed},
    };
}

// --- output plumbing --------------------------------------------------------

void ensure_dir(const fs::path& dir) { fs::create_directories(dir); }

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

void write_resolved_config(const fs::path& outdir, const json& resolved) {
    write_file(outdir / "resolved_config.json", resolved.dump(2) + "\n");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

corpus::Dataset load_labeled(const fs::path& dir, SequenceFormat fmt, int height, int width) {
    corpus::LoadReport report;
    corpus::Dataset ds =
        corpus::load_dataset(dir / "images", dir / "labels.csv", fmt, height, width, &report);
    for (const auto& s : report.skipped) std::cerr << "warning: skipped " << s << "\n";
    return ds;
}

// --- synth ------------------------------------------------------------------

struct SynthCli {
    std::string config_path, out, format = "ddm";
    std::size_t count = 1000;
    double empty_fraction = 0.1;
    int height = 64, width = 160;
    std::uint64_t seed = 0;
    CLI::Option *o_count = nullptr, *o_format = nullptr, *o_empty = nullptr, *o_height = nullptr,
                *o_width = nullptr, *o_seed = nullptr;
};

void run_synth(const SynthCli& cli) {
    std::string format = cli.format;
    corpus::CorpusParams params;
    params.count = cli.count;
    params.empty_fraction = cli.empty_fraction;
    params.height = cli.height;
    params.width = cli.width;
    params.seed = cli.seed;

    if (!cli.config_path.empty()) {
        const json j = load_json_file(cli.config_path);
        check_keys(j, {"count", "format", "empty_fraction", "height", "width", "seed", "style"},
                   "synth config");
        read_key(j, "count", params.count);
        read_key(j, "format", format);
        read_key(j, "empty_fraction", params.empty_fraction);
        read_key(j, "height", params.height);
        read_key(j, "width", params.width);
        read_key(j, "seed", params.seed);
        if (j.contains("style")) params.style = parse_style(j.at("style"));
    }
    if (cli.o_count->count()) params.count = cli.count;
    if (cli.o_format->count()) format = cli.format;
    if (cli.o_empty->count()) params.empty_fraction = cli.empty_fraction;
    if (cli.o_height->count()) params.height = cli.height;
    if (cli.o_width->count()) params.width = cli.width;
    if (cli.o_seed->count()) params.seed = cli.seed;

    params.format = SequenceFormat::from_name(format);
    params.validate();

    const corpus::Dataset ds = corpus::generate_dataset(params);
    ensure_dir(cli.out);
    corpus::save_dataset(ds, cli.out);

    json resolved{{"count", params.count},
                  {"format", params.format.name()},
                  {"empty_fraction", params.empty_fraction},
                  {"height", params.height},
                  {"width", params.width},
                  {"seed", params.seed},
                  {"style", style_json(params.style)}};
    write_resolved_config(cli.out, resolved);
    const json manifest{{"format", params.format.name()},
                        {"n", ds.items.size()},
                        {"seed", params.seed},
                        {"style", style_json(params.style)}};
    write_file(fs::path(cli.out) / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "synth: wrote " << ds.items.size() << " images to " << cli.out << "\n";
}

// --- train ------------------------------------------------------------------

struct TrainCli {
    std::string config_path, data, out, format = "ddm";
    int threads = 1;
    int epochs = 30, batch_size = 64;
    double lr_max = 0.2, val_fraction = 0.0;
    std::uint64_t seed = 0;
    CLI::Option *o_format = nullptr, *o_epochs = nullptr, *o_batch = nullptr, *o_lr = nullptr,
                *o_seed = nullptr, *o_val = nullptr;
};

void run_train(const TrainCli& cli) {
    std::string format = cli.format;
    double val_fraction = cli.val_fraction;
    nn::TrainConfig tcfg;
    tcfg.epochs = cli.epochs;
    tcfg.batch_size = cli.batch_size;
    tcfg.lr_max = cli.lr_max;
    tcfg.warmup_epochs = 3;
    tcfg.seed = cli.seed;

    json model_section;
    if (!cli.config_path.empty()) {
        const json j = load_json_file(cli.config_path);
        check_keys(j, {"format", "val_fraction", "model", "train"}, "train config");
        read_key(j, "format", format);
        read_key(j, "val_fraction", val_fraction);
        if (j.contains("train")) parse_train_section(j.at("train"), tcfg);
        if (j.contains("model")) model_section = j.at("model");
    }
    if (cli.o_format->count()) format = cli.format;
    if (cli.o_epochs->count()) tcfg.epochs = cli.epochs;
    if (cli.o_batch->count()) tcfg.batch_size = cli.batch_size;
    if (cli.o_lr->count()) tcfg.lr_max = cli.lr_max;
    if (cli.o_seed->count()) tcfg.seed = cli.seed;
    if (cli.o_val->count()) val_fraction = cli.val_fraction;
    if (tcfg.warmup_epochs >= tcfg.epochs) tcfg.warmup_epochs = std::max(0, tcfg.epochs / 10);

    const SequenceFormat fmt = SequenceFormat::from_name(format);
    nn::ModelConfig mcfg = nn::ModelConfig::defaults(fmt, tcfg.seed);
    if (!model_section.is_null()) parse_model_section(model_section, mcfg);
    mcfg.validate();
    tcfg.validate();
    if (val_fraction < 0.0 || val_fraction >= 1.0) {
        throw ConfigError("val_fraction must lie in [0, 1)");
    }

    corpus::Dataset all = load_labeled(cli.data, fmt, mcfg.input_height, mcfg.input_width);
    corpus::Dataset train_set = std::move(all);
    corpus::Dataset val_set;
    if (val_fraction > 0.0) {
        std::tie(train_set, val_set) =
            corpus::split_dataset(train_set, val_fraction, mix_seed(tcfg.seed, 0x5A17));
    }

    nn::Model model = nn::make_model(mcfg);
    const auto history = nn::train(model, train_set, val_fraction > 0.0 ? &val_set : nullptr,
                                   tcfg, cli.threads, &std::cout);

    ensure_dir(cli.out);
    nn::save_checkpoint(model, fs::path(cli.out) / "model.ckpt");

    std::string log = "epoch,lr,train_loss,train_seq_acc,val_seq_acc\n";
    for (const auto& e : history) {
        log += csv_join({std::to_string(e.epoch), fmt_double(e.lr), fmt_double(e.train_loss),
                         fmt_double(e.train_seq_acc),
                         e.val_seq_acc ? fmt_double(*e.val_seq_acc) : std::string()});
        log += "\n";
    }
    write_file(fs::path(cli.out) / "train_log.csv", log);

    json resolved{{"format", fmt.name()},
                  {"data", cli.data},
                  {"val_fraction", val_fraction},
                  {"threads", cli.threads},
                  {"model", model_json(mcfg)},
                  {"train", train_json(tcfg)}};
    write_resolved_config(cli.out, resolved);

    const double final_acc = evaluate_model(model, train_set);
    std::cout << "train: " << train_set.items.size() << " samples, final train seq-acc "
              << fmt_double(final_acc) << ", checkpoint " << (fs::path(cli.out) / "model.ckpt")
              << "\n";
}

// --- eval -------------------------------------------------------------------

struct EvalCli {
    std::string data, model, out;
};

void run_eval(const EvalCli& cli) {
    const nn::Model model = nn::load_checkpoint(cli.model);
    const SequenceFormat fmt = model.config.format();
    const corpus::Dataset ds =
        load_labeled(cli.data, fmt, model.config.input_height, model.config.input_width);

    const std::vector<nn::Prediction> preds = nn::predict_dataset(model, ds);
    std::vector<TokenLabel> argmax, labels;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        argmax.push_back(preds[i].argmax);
        labels.push_back(ds.items[i].label);
    }
    const EvalResult r = evaluate(argmax, labels, fmt);

    std::string csv = "metric,value\n";
    csv += "n," + std::to_string(r.n) + "\n";
    csv += "seq_acc," + fmt_double(r.seq_acc) + "\n";
    if (r.day_acc) csv += "day_acc," + fmt_double(*r.day_acc) + "\n";
    if (r.month_acc) csv += "month_acc," + fmt_double(*r.month_acc) + "\n";
    if (r.year_acc) csv += "year_acc," + fmt_double(*r.year_acc) + "\n";
    ensure_dir(cli.out);
    write_file(fs::path(cli.out) / "eval.csv", csv);
    write_resolved_config(cli.out, json{{"data", cli.data}, {"model", cli.model}});
    std::cout << "eval: n=" << r.n << " seq_acc=" << fmt_double(r.seq_acc) << "\n";
}

// --- transcribe -------------------------------------------------------------

struct TranscribeCli {
    std::string data, model, out;
};

void run_transcribe(const TranscribeCli& cli) {
    const nn::Model model = nn::load_checkpoint(cli.model);
    const SequenceFormat fmt = model.config.format();

    // id -> image file; a labels.csv fixes ids and order, otherwise every PNG
    // under data/images (or data itself) is transcribed in filename order.
    std::vector<std::pair<std::string, fs::path>> inputs;
    const fs::path data_dir(cli.data);
    const fs::path images_dir =
        fs::exists(data_dir / "images") ? data_dir / "images" : data_dir;
    if (fs::exists(data_dir / "labels.csv")) {
        const CsvTable table = read_csv(data_dir / "labels.csv");
        const std::size_t path_col = table.column("image_path");
        for (const auto& row : table.rows) {
            inputs.emplace_back(fs::path(row[path_col]).stem().string(),
                                images_dir / row[path_col]);
        }
    } else {
        for (const auto& entry : fs::directory_iterator(images_dir)) {
            if (entry.path().extension() == ".png") {
                inputs.emplace_back(entry.path().stem().string(), entry.path());
            }
        }
        std::sort(inputs.begin(), inputs.end());
    }
    if (inputs.empty()) throw EmptyInputError("transcribe: no input images in " + cli.data);

    std::vector<std::string> header{"image_id", "date"};
    for (const auto& head : model.config.heads) {
        const std::string base = lower(head_name_string(head.name));
        for (int j = 0; j < head.class_count(); ++j) {
            header.push_back(base + "_p" + std::to_string(j));
        }
    }
    header.push_back("confidence");

    std::string csv = csv_join(header) + "\n";
    for (const auto& [id, path] : inputs) {
        const ImageU8 img = corpus::resize_pad(corpus::read_png_gray(path),
                                               model.config.input_height,
                                               model.config.input_width);
        const nn::Prediction p = nn::predict(model, to_float(img));
        std::vector<std::string> row{id, format_label(p.argmax, fmt)};
        for (const auto& dist : p.dists) {
            for (const double v : dist.probs) row.push_back(fmt_double(v));
        }
        row.push_back(fmt_double(p.confidence));
        csv += csv_join(row) + "\n";
    }
    ensure_dir(cli.out);
    write_file(fs::path(cli.out) / "predictions.csv", csv);
    write_resolved_config(cli.out, json{{"data", cli.data}, {"model", cli.model}});
    std::cout << "transcribe: wrote " << inputs.size() << " predictions\n";
}

// --- coverage ---------------------------------------------------------------

struct CoverageCli {
    std::string config_path, data, model, out;
    bool svg = true;
};

std::string coverage_svg(const std::vector<CoveragePoint>& curve) {
    // Fixed 0..1 axes; coverage along x, accuracy along y.
    const double x0 = 50, y0 = 280, w = 400, h = 240;
    auto px = [&](double c) { return x0 + w * c; };
    auto py = [&](double a) { return y0 - h * a; };
    char buf[256];
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 500 330\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n"
        "<rect width=\"500\" height=\"330\" fill=\"white\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#ddd\"/>\n",
                      px(v), py(0.0), px(v), py(1.0));
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#ddd\"/>\n",
                      px(0.0), py(v), px(1.0), py(v));
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.1f</text>\n", px(v),
                      y0 + 16, v);
        svg += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.1f</text>\n", x0 - 6,
                      py(v) + 4, v);
        svg += buf;
    }
    svg += "<text x=\"250\" y=\"316\" text-anchor=\"middle\">coverage</text>\n";
    svg += "<text x=\"14\" y=\"160\" text-anchor=\"middle\" transform=\"rotate(-90 14 160)\">"
           "sequence accuracy</text>\n";
    std::string points;
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(p.coverage), py(p.accuracy));
        points += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"" + points +
           "\"/>\n";
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"#1f6fb2\"/>\n",
                      px(p.coverage), py(p.accuracy));
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

void run_coverage(const CoverageCli& cli) {
    std::vector<double> grid;
    if (!cli.config_path.empty()) {
        const json j = load_json_file(cli.config_path);
        check_keys(j, {"grid"}, "coverage config");
        read_key(j, "grid", grid);
    }
    if (grid.empty()) {
        for (int i = 1; i <= 20; ++i) grid.push_back(i / 20.0);
    }

    const nn::Model model = nn::load_checkpoint(cli.model);
    const SequenceFormat fmt = model.config.format();
    const corpus::Dataset ds =
        load_labeled(cli.data, fmt, model.config.input_height, model.config.input_width);
    const std::vector<nn::Prediction> preds = nn::predict_dataset(model, ds);

    std::vector<double> confidences;
    std::vector<std::uint8_t> correct;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        confidences.push_back(preds[i].confidence);
        correct.push_back(preds[i].argmax == ds.items[i].label ? 1 : 0);
    }
    const auto curve = coverage_curve(confidences, correct, grid);

    std::string csv = "coverage,accuracy\n";
    for (const auto& p : curve) {
        csv += csv_join({fmt_double(p.coverage), fmt_double(p.accuracy)}) + "\n";
    }
    ensure_dir(cli.out);
    write_file(fs::path(cli.out) / "coverage.csv", csv);
    if (cli.svg) write_file(fs::path(cli.out) / "coverage.svg", coverage_svg(curve));

    json jgrid = json::array();
    for (const double g : grid) jgrid.push_back(g);
    write_resolved_config(
        cli.out, json{{"data", cli.data}, {"model", cli.model}, {"grid", jgrid},
                      {"svg", cli.svg}});
    std::cout << "coverage: " << curve.size() << " points, full-set accuracy "
              << fmt_double(curve.back().accuracy) << "\n";
}

// --- link -------------------------------------------------------------------

struct LinkCli {
    std::string config_path, out, recognizers = "mock";
    std::size_t records = 5000, extras = 3000;
    int regions = 25, rounds = 5, threads = 1;
    std::uint64_t seed = 0;
    CLI::Option *o_recognizers = nullptr, *o_records = nullptr, *o_extras = nullptr,
                *o_regions = nullptr, *o_rounds = nullptr, *o_seed = nullptr;
};

struct NnLinkParams {
    std::size_t pretrain_dates = 1500;
    int name_repeats = 10;
    int pretrain_epochs = 10;
    int epochs = 8;
    int batch_size = 64;
    double lr_max = 0.25;
    double finetune_lr_max = 0.1;
};

json quality_json(const link::LinkQuality& q) {
    return json{{"links", q.links},
                {"correct", q.correct},
                {"precision", q.precision},
                {"matchable", q.matchable},
                {"matched_matchable", q.matched_matchable},
                {"match_rate", q.match_rate}};
}

// Base models for the pixel path: the date model pre-trains on a synthetic
// date corpus, the name models on rendered pool names — stand-ins for the
// external models a real deployment would start from.
struct NnStack {
    nn::Model date_base;
    nn::ConvNet<float> first_base, last_base;
    link::NameModelConfig name_arch;
    nn::ModelConfig date_arch;
    std::unique_ptr<link::NnDateTrainer> date_trainer;
    std::unique_ptr<link::NnNameTrainer> first_trainer, last_trainer;
    link::Pipeline::ModelSet base;
};

std::unique_ptr<NnStack> build_nn_stack(const link::CensusScenario& scenario,
                                        const NnLinkParams& np, int threads) {
    const auto& sc = scenario.config;
    auto stack = std::make_unique<NnStack>();

    nn::TrainConfig pre;
    pre.epochs = np.pretrain_epochs;
    pre.warmup_epochs = std::min(2, np.pretrain_epochs - 1);
    pre.batch_size = np.batch_size;
    pre.lr_max = np.lr_max;

    // Date base model.
    stack->date_arch = nn::ModelConfig::defaults(SequenceFormat::ddmyy(), mix_seed(sc.seed, 0xA1));
    stack->date_arch.input_height = sc.field_height;
    stack->date_arch.input_width = sc.field_width;
    stack->date_arch.conv_blocks = {{12, 3, 2}, {24, 3, 2}, {48, 3, 2}};
    stack->date_arch.feature_dim = 96;

    corpus::CorpusParams pp;
    pp.count = np.pretrain_dates;
    pp.format = SequenceFormat::ddmyy();
    pp.empty_fraction = 0.02;
    pp.height = sc.field_height;
    pp.width = sc.field_width;
    pp.style = sc.style;
    pp.seed = mix_seed(sc.seed, 0xDA7E);
    const corpus::Dataset date_ds = corpus::generate_dataset(pp);

    stack->date_base = nn::make_model(stack->date_arch);
    nn::TrainConfig pre_date = pre;
    pre_date.seed = mix_seed(sc.seed, 0xA1, 1);
    std::cout << "link: pre-training date model on " << date_ds.items.size() << " images\n";
    nn::train(stack->date_base, date_ds, nullptr, pre_date, threads, nullptr);

    // Name base models, one per field, trained on rendered pool names.
    stack->name_arch.input_height = sc.field_height;
    stack->name_arch.input_width = sc.field_width;
    stack->name_arch.max_length = 12;
    stack->name_arch.seed = mix_seed(sc.seed, 0xA2);

    const auto train_name_base = [&](const std::vector<std::string>& pool, link::FieldKind kind,
                                     std::uint64_t salt) {
        std::vector<link::CensusImage> imgs;
        std::vector<link::TrainExample> examples;
        imgs.reserve(pool.size() * static_cast<std::size_t>(np.name_repeats));
        for (std::size_t n = 0; n < pool.size(); ++n) {
            for (int r = 0; r < np.name_repeats; ++r) {
                link::CensusImage img;
                const ImageU8 rendered = quantize(
                    corpus::render_text(pool[n], sc.style, sc.field_height, sc.field_width,
                                        mix_seed(sc.seed, salt ^ n, static_cast<std::uint64_t>(r))));
                if (kind == link::FieldKind::FirstName) img.first_name_field = rendered;
                else img.last_name_field = rendered;
                imgs.push_back(std::move(img));
            }
        }
        for (std::size_t i = 0; i < imgs.size(); ++i) {
            examples.push_back({&imgs[i], pool[i / static_cast<std::size_t>(np.name_repeats)]});
        }
        nn::TrainConfig cfg = pre;
        link::NnNameTrainer trainer(stack->name_arch, cfg, kind, nullptr, threads);
        std::cout << "link: pre-training " << (kind == link::FieldKind::FirstName ? "first" : "last")
                  << "-name model on " << examples.size() << " images\n";
        return trainer.train(examples, mix_seed(sc.seed, salt, 1));
    };

    auto first_rec = train_name_base(scenario.world->first_name_pool, link::FieldKind::FirstName,
                                     0xF117);
    auto last_rec = train_name_base(scenario.world->last_name_pool, link::FieldKind::LastName,
                                    0x1A57);
    stack->first_base = static_cast<const link::NnNameRecognizer&>(*first_rec).net();
    stack->last_base = static_cast<const link::NnNameRecognizer&>(*last_rec).net();

    nn::TrainConfig fine = pre;
    fine.epochs = np.epochs;
    fine.warmup_epochs = std::min(1, np.epochs - 1);
    fine.lr_max = np.finetune_lr_max;

    stack->date_trainer = std::make_unique<link::NnDateTrainer>(stack->date_arch, fine,
                                                                &stack->date_base, threads);
    stack->first_trainer = std::make_unique<link::NnNameTrainer>(
        stack->name_arch, fine, link::FieldKind::FirstName, &stack->first_base, threads);
    stack->last_trainer = std::make_unique<link::NnNameTrainer>(
        stack->name_arch, fine, link::FieldKind::LastName, &stack->last_base, threads);

    stack->base.date = std::make_unique<link::NnDateRecognizer>(stack->date_base);
    stack->base.first_name = std::move(first_rec);
    stack->base.last_name = std::move(last_rec);
    return stack;
}

void run_link(const LinkCli& cli) {
    link::CensusScenarioConfig sc;
    sc.record_count = cli.records;
    sc.extra_image_count = cli.extras;
    sc.region_count = cli.regions;
    sc.seed = cli.seed;
    link::LinkConfig lc;
    lc.rounds = cli.rounds;
    lc.seed = cli.seed;
    std::string recognizers = cli.recognizers;
    NnLinkParams np;

    if (!cli.config_path.empty()) {
        const json j = load_json_file(cli.config_path);
        check_keys(j,
                   {"records", "extra_images", "regions", "seed", "recognizers", "rounds",
                    "stop_gain_fraction", "criteria", "mock", "style", "field_height",
                    "field_width", "nn"},
                   "link config");
        read_key(j, "records", sc.record_count);
        read_key(j, "extra_images", sc.extra_image_count);
        read_key(j, "regions", sc.region_count);
        read_key(j, "seed", sc.seed);
        read_key(j, "recognizers", recognizers);
        read_key(j, "rounds", lc.rounds);
        read_key(j, "stop_gain_fraction", lc.stop_gain_fraction);
        read_key(j, "field_height", sc.field_height);
        read_key(j, "field_width", sc.field_width);
        if (j.contains("criteria")) {
            const json& c = j.at("criteria");
            check_keys(c, {"min_agreeing_fields", "require_uniqueness"}, "criteria");
            read_key(c, "min_agreeing_fields", lc.criteria.min_agreeing_fields);
            read_key(c, "require_uniqueness", lc.criteria.require_uniqueness);
        }
        if (j.contains("mock")) {
            const json& m = j.at("mock");
            check_keys(m, {"base_accuracy", "memorized_accuracy", "accuracy_scale"}, "mock");
            read_key(m, "base_accuracy", sc.mock.base_accuracy);
            read_key(m, "memorized_accuracy", sc.mock.memorized_accuracy);
            read_key(m, "accuracy_scale", sc.mock.accuracy_scale);
        }
        if (j.contains("style")) sc.style = parse_style(j.at("style"));
        if (j.contains("nn")) {
            const json& n = j.at("nn");
            check_keys(n,
                       {"pretrain_dates", "name_repeats", "pretrain_epochs", "epochs",
                        "batch_size", "lr_max", "finetune_lr_max"},
                       "nn");
            read_key(n, "pretrain_dates", np.pretrain_dates);
            read_key(n, "name_repeats", np.name_repeats);
            read_key(n, "pretrain_epochs", np.pretrain_epochs);
            read_key(n, "epochs", np.epochs);
            read_key(n, "batch_size", np.batch_size);
            read_key(n, "lr_max", np.lr_max);
            read_key(n, "finetune_lr_max", np.finetune_lr_max);
        }
    }
    if (cli.o_recognizers->count()) recognizers = cli.recognizers;
    if (cli.o_records->count()) sc.record_count = cli.records;
    if (cli.o_extras->count()) sc.extra_image_count = cli.extras;
    if (cli.o_regions->count()) sc.region_count = cli.regions;
    if (cli.o_rounds->count()) lc.rounds = cli.rounds;
    if (cli.o_seed->count()) {
        sc.seed = cli.seed;
        lc.seed = cli.seed;
    }
    if (recognizers != "mock" && recognizers != "nn") {
        throw ConfigError("recognizers must be mock or nn");
    }
    sc.render_pixels = recognizers == "nn";
    sc.validate();
    lc.validate();

    std::cout << "link: building scenario (" << sc.record_count << " records, "
              << sc.extra_image_count << " extra images, " << sc.region_count << " regions)\n";
    const link::CensusScenario scenario = link::make_census_scenario(sc);

    link::Pipeline::Result result;
    if (recognizers == "mock") {
        link::MockSetup setup = link::make_mock_setup(scenario);
        link::Pipeline pipeline(scenario.images, scenario.records, *setup.date_trainer,
                                *setup.first_name_trainer, *setup.last_name_trainer,
                                std::move(setup.base), lc);
        result = pipeline.run();
    } else {
        auto stack = build_nn_stack(scenario, np, cli.threads);
        link::Pipeline pipeline(scenario.images, scenario.records, *stack->date_trainer,
                                *stack->first_trainer, *stack->last_trainer,
                                std::move(stack->base), lc);
        result = pipeline.run();
    }

    const link::LinkQuality quality = link::assess_links(scenario, result.links, lc.criteria);

    ensure_dir(cli.out);
    std::string links_csv = "image_id,record_id,round_found\n";
    for (const auto& m : result.links) {
        links_csv += csv_join({m.image_id, m.record_id, std::to_string(m.round_found)}) + "\n";
    }
    write_file(fs::path(cli.out) / "links.csv", links_csv);

    json rounds = json::array();
    for (const auto& r : result.state.history) {
        rounds.push_back({{"round", r.round},
                          {"matches_A", r.matches_a},
                          {"matches_B", r.matches_b},
                          {"intersection", r.accepted},
                          {"gain", r.gain}});
    }
    write_file(fs::path(cli.out) / "rounds.json", rounds.dump(2) + "\n");
    write_file(fs::path(cli.out) / "quality.json", quality_json(quality).dump(2) + "\n");

    json resolved{{"records", sc.record_count},
                  {"extra_images", sc.extra_image_count},
                  {"regions", sc.region_count},
                  {"seed", sc.seed},
                  {"recognizers", recognizers},
                  {"rounds", lc.rounds},
                  {"stop_gain_fraction", lc.stop_gain_fraction},
                  {"criteria",
                   {{"min_agreeing_fields", lc.criteria.min_agreeing_fields},
                    {"require_uniqueness", lc.criteria.require_uniqueness}}},
                  {"mock",
                   {{"base_accuracy", sc.mock.base_accuracy},
                    {"memorized_accuracy", sc.mock.memorized_accuracy},
                    {"accuracy_scale", sc.mock.accuracy_scale}}}};
    if (recognizers == "nn") {
        resolved["field_height"] = sc.field_height;
        resolved["field_width"] = sc.field_width;
        resolved["style"] = style_json(sc.style);
        resolved["nn"] = {{"pretrain_dates", np.pretrain_dates},
                          {"name_repeats", np.name_repeats},
                          {"pretrain_epochs", np.pretrain_epochs},
                          {"epochs", np.epochs},
                          {"batch_size", np.batch_size},
                          {"lr_max", np.lr_max},
                          {"finetune_lr_max", np.finetune_lr_max}};
    }
    write_resolved_config(cli.out, resolved);

    std::cout << "link: " << result.state.history.size() << " rounds, " << quality.links
              << " links, precision " << fmt_double(quality.precision) << ", match rate "
              << fmt_double(quality.match_rate) << " (" << quality.matched_matchable << "/"
              << quality.matchable << " matchable)\n";
}

// --- wiring -----------------------------------------------------------------

constexpr const char* kSynthDoc = R"(Config keys (synth):
  count           number of images                     (default 1000)
  format          ddm | ddmyy | ddmyyyy                (default ddm)
  empty_fraction  share of blank, all-missing images   (default 0.1)
  height, width   image size in pixels                 (default 64 x 160)
  seed            corpus seed                          (default 0)
  style           object: glyph_jitter, stroke_min, stroke_max, slant_deg,
                  noise_level, fade_level, blot_prob,
                  layout (day-month-year | year-day-month),
                  month_style (numeric | text))";

constexpr const char* kTrainDoc = R"(Config keys (train):
  format          ddm | ddmyy | ddmyyyy                (default ddm)
  val_fraction    held-out share for per-epoch eval    (default 0)
  model           object: input_height, input_width, conv_blocks
                  (filter counts or [filters, kernel, stride] triples),
                  feature_dim, dropout_prob, seed
  train           object: batch_size, lr_max, momentum, epochs,
                  warmup_epochs, grad_clip_value, weight_decay,
                  label_smoothing, random_erase_prob, seed)";

constexpr const char* kCoverageDoc = R"(Config keys (coverage):
  grid            coverage fractions in (0, 1]         (default 0.05 .. 1.0))";

constexpr const char* kLinkDoc = R"(Config keys (link):
  records             register entries                  (default 5000)
  extra_images        images without a record           (default 3000)
  regions             region count                      (default 25)
  seed                scenario and pipeline seed        (default 0)
  recognizers         mock | nn                         (default mock)
  rounds              improvement rounds                (default 5)
  stop_gain_fraction  stop threshold as share of records (default 0.005)
  criteria            object: min_agreeing_fields, require_uniqueness
  mock                object: base_accuracy, memorized_accuracy, accuracy_scale
  field_height, field_width, style   pixel snippets (nn mode)
  nn                  object: pretrain_dates, name_repeats, pretrain_epochs,
                      epochs, batch_size, lr_max, finetune_lr_max
nn mode trains real models and is far slower; start with a few hundred records.)";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"date recognition and record linkage toolkit"};
    app.require_subcommand(1);

    SynthCli synth;
    auto* s_synth = app.add_subcommand("synth", "Synthesise a labelled date corpus");
    s_synth->add_option("--config", synth.config_path, "JSON config file");
    s_synth->add_option("-o,--out", synth.out, "Output directory")->required();
    synth.o_count = s_synth->add_option("--count", synth.count, "Number of images");
    synth.o_format = s_synth->add_option("--format", synth.format, "ddm | ddmyy | ddmyyyy");
    synth.o_empty =
        s_synth->add_option("--empty-fraction", synth.empty_fraction, "Share of blank images");
    synth.o_height = s_synth->add_option("--height", synth.height, "Image height");
    synth.o_width = s_synth->add_option("--width", synth.width, "Image width");
    synth.o_seed = s_synth->add_option("--seed", synth.seed, "Corpus seed");
    s_synth->footer(kSynthDoc);
    s_synth->callback([&synth] { run_synth(synth); });

    TrainCli train;
    auto* s_train = app.add_subcommand("train", "Train a date model on a corpus");
    s_train->add_option("--config", train.config_path, "JSON config file");
    s_train->add_option("--data", train.data, "Corpus directory (images/ + labels.csv)")
        ->required();
    s_train->add_option("-o,--out", train.out, "Output directory")->required();
    train.o_format = s_train->add_option("--format", train.format, "ddm | ddmyy | ddmyyyy");
    train.o_epochs = s_train->add_option("--epochs", train.epochs, "Training epochs");
    train.o_batch = s_train->add_option("--batch-size", train.batch_size, "Batch size");
    train.o_lr = s_train->add_option("--lr-max", train.lr_max, "Peak learning rate");
    train.o_seed = s_train->add_option("--seed", train.seed, "Training seed");
    train.o_val =
        s_train->add_option("--val-fraction", train.val_fraction, "Held-out validation share");
    s_train->add_option("--threads", train.threads, "Worker thread cap");
    s_train->footer(kTrainDoc);
    s_train->callback([&train] { run_train(train); });

    EvalCli eval;
    auto* s_eval = app.add_subcommand("eval", "Evaluate a checkpoint on a labelled corpus");
    s_eval->add_option("--data", eval.data, "Corpus directory")->required();
    s_eval->add_option("--model", eval.model, "Checkpoint file")->required();
    s_eval->add_option("-o,--out", eval.out, "Output directory")->required();
    s_eval->callback([&eval] { run_eval(eval); });

    TranscribeCli transcribe;
    auto* s_tr = app.add_subcommand("transcribe", "Transcribe images with a checkpoint");
    s_tr->add_option("--data", transcribe.data, "Corpus or image directory")->required();
    s_tr->add_option("--model", transcribe.model, "Checkpoint file")->required();
    s_tr->add_option("-o,--out", transcribe.out, "Output directory")->required();
    s_tr->callback([&transcribe] { run_transcribe(transcribe); });

    CoverageCli coverage;
    auto* s_cov = app.add_subcommand("coverage", "Confidence-coverage curve for a checkpoint");
    s_cov->add_option("--config", coverage.config_path, "JSON config file");
    s_cov->add_option("--data", coverage.data, "Corpus directory")->required();
    s_cov->add_option("--model", coverage.model, "Checkpoint file")->required();
    s_cov->add_option("-o,--out", coverage.out, "Output directory")->required();
    s_cov->add_flag("--svg,!--no-svg", coverage.svg, "Write the SVG plot (default on)");
    s_cov->footer(kCoverageDoc);
    s_cov->callback([&coverage] { run_coverage(coverage); });

    LinkCli lnk;
    auto* s_link = app.add_subcommand("link", "Run the linking pipeline on a synthetic census");
    s_link->add_option("--config", lnk.config_path, "JSON config file");
    s_link->add_option("-o,--out", lnk.out, "Output directory")->required();
    lnk.o_recognizers = s_link->add_option("--recognizers", lnk.recognizers, "mock | nn");
    lnk.o_records = s_link->add_option("--records", lnk.records, "Register entries");
    lnk.o_extras = s_link->add_option("--extras", lnk.extras, "Images without a record");
    lnk.o_regions = s_link->add_option("--regions", lnk.regions, "Region count");
    lnk.o_rounds = s_link->add_option("--rounds", lnk.rounds, "Improvement rounds");
    lnk.o_seed = s_link->add_option("--seed", lnk.seed, "Scenario and pipeline seed");
    s_link->add_option("--threads", lnk.threads, "Worker thread cap");
    s_link->footer(kLinkDoc);
    s_link->callback([&lnk] { run_link(lnk); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
