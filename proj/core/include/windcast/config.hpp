#ifndef WINDCAST_CONFIG_HPP
#define WINDCAST_CONFIG_HPP

#include "windcast/forecast.hpp"
#include "windcast/synthetic.hpp"

#include <string>
#include <utility>
#include <vector>

namespace windcast {

/**
 * Flat sectioned key-value file ("[section]" headers, "key = value" lines,
 * '#' comments). Insertion order is preserved so serialized manifests are
 * deterministic and diff-able. Doubles round-trip exactly via %.17g.
 */
class KeyValueFile {
public:
    void set(const std::string& section, const std::string& key, const std::string& value);
    bool has(const std::string& section, const std::string& key) const;
    /// Throws std::invalid_argument naming [section] key when absent.
    const std::string& get(const std::string& section, const std::string& key) const;

    static KeyValueFile parse_string(const std::string& text);
    static KeyValueFile parse_file(const std::string& path);

    std::string serialize() const;
    void write(const std::string& path) const;

    using Section = std::pair<std::string, std::vector<std::pair<std::string, std::string>>>;
    const std::vector<Section>& sections() const { return sections_; }

private:
    std::vector<Section> sections_; // section "" = top level
};

/// Everything a CLI run needs; defaults reproduce the stock experiment
/// settings (window 20/delay 1, SSA 15/0.99, TCN 10ch k2 d1-2-4, GRU 64,
/// Adam 60 epochs batch 32, n_test 200).
struct CliConfig {
    std::string data_path;
    std::string data_column = "0";
    SyntheticConfig synthetic;
    PipelineConfig pipeline;
    ModelKind model_kind = ModelKind::TcnGru;
    std::vector<ModelKind> experiment_models{ModelKind::TcnGru, ModelKind::GruOnly,
                                             ModelKind::RnnOnly, ModelKind::Mlp};
    std::string out_dir = "out";
};

CliConfig default_cli_config();

/**
 * Overlay file values onto `base` and validate every field. Errors are
 * std::invalid_argument and name the offending [section] key.
 */
CliConfig apply_key_values(CliConfig base, const KeyValueFile& file);

/// Full config echo (always every field, resolved values).
KeyValueFile to_key_values(const CliConfig& config, const std::string& command);

/// Write the run manifest (config echo + command + version) beside outputs.
void write_manifest(const CliConfig& config, const std::string& command,
                    const std::string& path);

} // namespace windcast

#endif
