#include "windcast/config.hpp"

#include "windcast/csv.hpp"
#include "windcast/version.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace windcast {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_field(const std::string& section, const std::string& key,
                            const std::string& why) {
    throw std::invalid_argument("config: [" + section + "] " + key + " " + why);
}

} // namespace

void KeyValueFile::set(const std::string& section, const std::string& key,
                       const std::string& value) {
    for (auto& [name, entries] : sections_) {
        if (name != section) continue;
        for (auto& [k, v] : entries)
            if (k == key) {
                v = value;
                return;
            }
        entries.emplace_back(key, value);
        return;
    }
    sections_.push_back({section, {{key, value}}});
}

bool KeyValueFile::has(const std::string& section, const std::string& key) const {
    for (const auto& [name, entries] : sections_)
        if (name == section)
            for (const auto& [k, v] : entries)
                if (k == key) return true;
    return false;
}

const std::string& KeyValueFile::get(const std::string& section, const std::string& key) const {
    for (const auto& [name, entries] : sections_)
        if (name == section)
            for (const auto& [k, v] : entries)
                if (k == key) return v;
    throw std::invalid_argument("config: missing [" + section + "] " + key);
}

KeyValueFile KeyValueFile::parse_string(const std::string& text) {
    KeyValueFile file;
    std::istringstream in(text);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": malformed section header: " + t);
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value, got: " + t);
        file.set(section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return file;
}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

std::string KeyValueFile::serialize() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, entries] : sections_) {
        if (!first) out << '\n';
        first = false;
        if (!name.empty()) out << '[' << name << "]\n";
        for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
    }
    return out.str();
}

void KeyValueFile::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << serialize();
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ----------------------------------------------------------- CLI config

CliConfig default_cli_config() { return CliConfig{}; }

namespace {

std::size_t parse_size_field(const std::string& section, const std::string& key,
                             const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size() || v < 0) throw std::invalid_argument("neg");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        bad_field(section, key, "must be a non-negative integer (got \"" + value + "\")");
    }
}

double parse_double_field(const std::string& section, const std::string& key,
                          const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trail");
        return v;
    } catch (const std::exception&) {
        bad_field(section, key, "must be a number (got \"" + value + "\")");
    }
}

bool parse_bool_field(const std::string& section, const std::string& key,
                      const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    bad_field(section, key, "must be true or false (got \"" + value + "\")");
}

std::vector<std::size_t> parse_size_list_field(const std::string& section, const std::string& key,
                                               const std::string& value) {
    std::vector<std::size_t> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_size_field(section, key, item));
    }
    if (out.empty()) bad_field(section, key, "must be a comma-separated list of integers");
    return out;
}

std::string join_size_list(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

void validate(const CliConfig& config) {
    const PipelineConfig& p = config.pipeline;
    if (p.ssa.embed_dim < 2) bad_field("pssa", "embed_dim", "must be >= 2");
    if (p.ssa.pearson_threshold <= 0.0 || p.ssa.pearson_threshold > 1.0)
        bad_field("pssa", "threshold", "must be in (0, 1]");
    if (p.train.epochs < 1) bad_field("train", "epochs", "must be >= 1");
    if (p.train.batch_size < 1) bad_field("train", "batch_size", "must be >= 1");
    if (p.train.learning_rate <= 0.0) bad_field("train", "learning_rate", "must be > 0");
    if (p.window_dim < 1) bad_field("window", "dim", "must be >= 1");
    if (p.delay < 1) bad_field("window", "delay", "must be >= 1");
    if (p.horizons.empty()) bad_field("window", "horizons", "must not be empty");
    for (std::size_t h : p.horizons)
        if (h < 1) bad_field("window", "horizons", "entries must be >= 1");
    if (p.n_test < 1) bad_field("split", "n_test", "must be >= 1");
    if (p.net.tcn.channels < 1) bad_field("model", "tcn_channels", "must be >= 1");
    if (p.net.tcn.blocks < 1) bad_field("model", "tcn_blocks", "must be >= 1");
    if (p.net.tcn.dilations.empty()) bad_field("model", "tcn_dilations", "must not be empty");
    if (p.net.tcn.hidden_dim < 1) bad_field("model", "tcn_hidden", "must be >= 1");
    if (p.net.gru_hidden < 1) bad_field("model", "gru_hidden", "must be >= 1");
    if (p.net.rnn_hidden < 1) bad_field("model", "rnn_hidden", "must be >= 1");
    if (p.net.mlp_widths.size() < 2) bad_field("model", "mlp_widths", "needs at least two widths");
    if (p.net.mlp_widths.front() != p.window_dim)
        bad_field("model", "mlp_widths", "first width must equal [window] dim");
    if (p.net.mlp_widths.back() != 1) bad_field("model", "mlp_widths", "last width must be 1");
    if (config.synthetic.n < 1) bad_field("synthetic", "n", "must be >= 1");
    if (config.synthetic.period1 <= 0) bad_field("synthetic", "period1", "must be > 0");
    if (config.synthetic.period2 <= 0) bad_field("synthetic", "period2", "must be > 0");
    if (config.synthetic.ar_sigma < 0) bad_field("synthetic", "ar_sigma", "must be >= 0");
    if (config.synthetic.noise_sigma < 0) bad_field("synthetic", "noise_sigma", "must be >= 0");
    if (config.out_dir.empty()) bad_field("run", "out", "must not be empty");
}

} // namespace

CliConfig apply_key_values(CliConfig base, const KeyValueFile& file) {
    for (const auto& [section, entries] : file.sections()) {
        for (const auto& [key, value] : entries) {
            if (section.empty()) {
                // top-level manifest bookkeeping; informational on load
                if (key == "command" || key == "version") continue;
                bad_field(section, key, "is not a recognized top-level key");
            } else if (section == "data") {
                if (key == "path") base.data_path = value;
                else if (key == "column") base.data_column = value;
                else bad_field(section, key, "is not a recognized key");
            } else if (section == "synthetic") {
                if (key == "n") base.synthetic.n = parse_size_field(section, key, value);
                else if (key == "seed") base.synthetic.seed = parse_size_field(section, key, value);
                else if (key == "base") base.synthetic.base = parse_double_field(section, key, value);
                else if (key == "amp1") base.synthetic.amp1 = parse_double_field(section, key, value);
                else if (key == "period1") base.synthetic.period1 = parse_double_field(section, key, value);
                else if (key == "amp2") base.synthetic.amp2 = parse_double_field(section, key, value);
                else if (key == "period2") base.synthetic.period2 = parse_double_field(section, key, value);
                else if (key == "ar1") base.synthetic.ar1 = parse_double_field(section, key, value);
                else if (key == "ar2") base.synthetic.ar2 = parse_double_field(section, key, value);
                else if (key == "ar_sigma") base.synthetic.ar_sigma = parse_double_field(section, key, value);
                else if (key == "noise_sigma") base.synthetic.noise_sigma = parse_double_field(section, key, value);
                else bad_field(section, key, "is not a recognized key");
            } else if (section == "pssa") {
                if (key == "embed_dim") base.pipeline.ssa.embed_dim = parse_size_field(section, key, value);
                else if (key == "threshold") base.pipeline.ssa.pearson_threshold = parse_double_field(section, key, value);
                else bad_field(section, key, "is not a recognized key");
            } else if (section == "model") {
                if (key == "kind") base.model_kind = model_kind_from_name(value);
                else if (key == "tcn_channels") base.pipeline.net.tcn.channels = parse_size_field(section, key, value);
                else if (key == "tcn_dilations") base.pipeline.net.tcn.dilations = parse_size_list_field(section, key, value);
                else if (key == "tcn_blocks") base.pipeline.net.tcn.blocks = parse_size_field(section, key, value);
                else if (key == "tcn_hidden") base.pipeline.net.tcn.hidden_dim = parse_size_field(section, key, value);
                else if (key == "gru_hidden") base.pipeline.net.gru_hidden = parse_size_field(section, key, value);
                else if (key == "rnn_hidden") base.pipeline.net.rnn_hidden = parse_size_field(section, key, value);
                else if (key == "mlp_widths") base.pipeline.net.mlp_widths = parse_size_list_field(section, key, value);
                else bad_field(section, key, "is not a recognized key");
            } else if (section == "train") {
                if (key == "epochs") base.pipeline.train.epochs = parse_size_field(section, key, value);
                else if (key == "batch_size") base.pipeline.train.batch_size = parse_size_field(section, key, value);
                else if (key == "learning_rate") base.pipeline.train.learning_rate = parse_double_field(section, key, value);
                else if (key == "seed") base.pipeline.train.seed = parse_size_field(section, key, value);
                else bad_field(section, key, "is not a recognized key");
            } else if (section == "window") {
                if (key == "dim") base.pipeline.window_dim = parse_size_field(section, key, value);
                else if (key == "delay") base.pipeline.delay = parse_size_field(section, key, value);
                else if (key == "horizons") base.pipeline.horizons = parse_size_list_field(section, key, value);
                else bad_field(section, key, "is not a recognized key");
            } else if (section == "split") {
                if (key == "n_test") base.pipeline.n_test = parse_size_field(section, key, value);
                else bad_field(section, key, "is not a recognized key");
            } else if (section == "run") {
                if (key == "mode") base.pipeline.mode = denoise_mode_from_name(value);
                else if (key == "denoise") base.pipeline.denoise = parse_bool_field(section, key, value);
                else if (key == "normalize") base.pipeline.normalize = parse_bool_field(section, key, value);
                else if (key == "out") base.out_dir = value;
                else bad_field(section, key, "is not a recognized key");
            } else if (section == "experiment") {
                if (key == "models") {
                    base.experiment_models.clear();
                    std::stringstream ss(value);
                    std::string item;
                    while (std::getline(ss, item, ','))
                        if (!trim(item).empty())
                            base.experiment_models.push_back(model_kind_from_name(trim(item)));
                    if (base.experiment_models.empty())
                        bad_field(section, key, "must list at least one model");
                } else {
                    bad_field(section, key, "is not a recognized key");
                }
            } else {
                throw std::invalid_argument("config: [" + section + "] is not a recognized section");
            }
        }
    }
    // keep derived fields coherent
    base.pipeline.net.window_dim = base.pipeline.window_dim;
    validate(base);
    return base;
}

KeyValueFile to_key_values(const CliConfig& config, const std::string& command) {
    KeyValueFile file;
    file.set("", "command", command);
    file.set("", "version", kVersion);

    file.set("data", "path", config.data_path);
    file.set("data", "column", config.data_column);

    file.set("synthetic", "n", std::to_string(config.synthetic.n));
    file.set("synthetic", "seed", std::to_string(config.synthetic.seed));
    file.set("synthetic", "base", format_double(config.synthetic.base));
    file.set("synthetic", "amp1", format_double(config.synthetic.amp1));
    file.set("synthetic", "period1", format_double(config.synthetic.period1));
    file.set("synthetic", "amp2", format_double(config.synthetic.amp2));
    file.set("synthetic", "period2", format_double(config.synthetic.period2));
    file.set("synthetic", "ar1", format_double(config.synthetic.ar1));
    file.set("synthetic", "ar2", format_double(config.synthetic.ar2));
    file.set("synthetic", "ar_sigma", format_double(config.synthetic.ar_sigma));
    file.set("synthetic", "noise_sigma", format_double(config.synthetic.noise_sigma));

    file.set("pssa", "embed_dim", std::to_string(config.pipeline.ssa.embed_dim));
    file.set("pssa", "threshold", format_double(config.pipeline.ssa.pearson_threshold));

    file.set("model", "kind", model_kind_name(config.model_kind));
    file.set("model", "tcn_channels", std::to_string(config.pipeline.net.tcn.channels));
    file.set("model", "tcn_dilations", join_size_list(config.pipeline.net.tcn.dilations));
    file.set("model", "tcn_blocks", std::to_string(config.pipeline.net.tcn.blocks));
    file.set("model", "tcn_hidden", std::to_string(config.pipeline.net.tcn.hidden_dim));
    file.set("model", "gru_hidden", std::to_string(config.pipeline.net.gru_hidden));
    file.set("model", "rnn_hidden", std::to_string(config.pipeline.net.rnn_hidden));
    file.set("model", "mlp_widths", join_size_list(config.pipeline.net.mlp_widths));

    file.set("train", "epochs", std::to_string(config.pipeline.train.epochs));
    file.set("train", "batch_size", std::to_string(config.pipeline.train.batch_size));
    file.set("train", "learning_rate", format_double(config.pipeline.train.learning_rate));
    file.set("train", "seed", std::to_string(config.pipeline.train.seed));

    file.set("window", "dim", std::to_string(config.pipeline.window_dim));
    file.set("window", "delay", std::to_string(config.pipeline.delay));
    file.set("window", "horizons", join_size_list(config.pipeline.horizons));

    file.set("split", "n_test", std::to_string(config.pipeline.n_test));

    file.set("run", "mode", denoise_mode_name(config.pipeline.mode));
    file.set("run", "denoise", config.pipeline.denoise ? "true" : "false");
    file.set("run", "normalize", config.pipeline.normalize ? "true" : "false");
    file.set("run", "out", config.out_dir);

    std::string models;
    for (std::size_t i = 0; i < config.experiment_models.size(); ++i) {
        if (i) models += ',';
        models += model_kind_name(config.experiment_models[i]);
    }
    file.set("experiment", "models", models);
    return file;
}

void write_manifest(const CliConfig& config, const std::string& command,
                    const std::string& path) {
    to_key_values(config, command).write(path);
}

} // namespace windcast
