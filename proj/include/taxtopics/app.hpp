#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace taxtopics {
namespace app {

inline constexpr const char* kVersion = "0.1.0";

nlohmann::json default_config();

// rejects unknown keys anywhere in the document, reporting the full path
void validate_config(const nlohmann::json& user);

// file + `--set section.key=value` overrides, merged over defaults
nlohmann::json load_config(const std::string& path,
                           const std::vector<std::string>& overrides);
void apply_override(nlohmann::json& cfg, const std::string& assignment);

// FNV-1a 64 of the file bytes, hex-encoded
std::string file_hash_hex(const std::string& path);

void cmd_preprocess(const nlohmann::json& cfg);
void cmd_lda_step1(const nlohmann::json& cfg);
void cmd_seed(const nlohmann::json& cfg);
void cmd_lda_step2(const nlohmann::json& cfg);
void cmd_prevalence(const nlohmann::json& cfg);
void cmd_news(const nlohmann::json& cfg);
void cmd_lp(const nlohmann::json& cfg);
void cmd_simulate(const nlohmann::json& cfg);

// dispatches a subcommand name; throws on unknown command
void run_command(const std::string& name, const nlohmann::json& cfg);

}  // namespace app
}  // namespace taxtopics
