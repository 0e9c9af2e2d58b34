#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "f2s/gateway/gateway.hpp"
#include "f2s/losses/losses.hpp"
#include "f2s/pairing/pairing.hpp"
#include "f2s/sandbox/sandbox.hpp"
#include "f2s/styleforge/styleforge.hpp"

namespace f2s::cli {

enum class Role { judge, generator, negative, embedding };

struct GatewaySettings {
  bool mock = true;
  std::optional<std::filesystem::path> fixtures;
  std::size_t context_limit = 4096;
  std::size_t embedding_dim = 256;
  gateway::HttpConfig http;
  /// Completion model per role; roles without an entry use http.model.
  std::map<Role, std::string> role_models;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::filesystem::path data_dir;
  std::filesystem::path work_dir = ".f2s-work";
  std::map<std::string, std::filesystem::path> prompts;  // name -> path
  pairing::JudgeConfig judge;
  /// Pairs whose best judge score is below this are dropped before testing.
  double judge_min_score = 3.0;
  styleforge::StyleDataConfig style;
  losses::LossConfig loss;
  sandbox::ExecLimits limits;
  sandbox::OutputPolicy output;
  sandbox::ToolchainMap toolchains;
  GatewaySettings gateway;
  std::optional<std::filesystem::path> embedding_cache;

  /// Path of a prompt template; relative paths resolve against data_dir.
  std::filesystem::path prompt_path(const std::string& name) const;
  PromptTemplate prompt(const std::string& name) const;
  /// Checks sub-config ranges and that every referenced template exists.
  void validate() const;
};

/// Built-in defaults: judge K 5, recall 10, m = n = 10, alpha 0.8, beta 0.6,
/// temperature 0.7, mock gateway, default toolchains.
PipelineConfig default_config();

/// Reads a YAML file (or only defaults when `path` is empty), then applies
/// environment overrides: F2S_SECTION__KEY=value sets section.key, e.g.
/// F2S_JUDGE__K=7 or F2S_SEED=3. F2S_API_KEY is a secret, never a setting.
PipelineConfig load_config(const std::optional<std::filesystem::path>& path,
                           const std::map<std::string, std::string>& env);

/// The process environment as a map.
std::map<std::string, std::string> environment();

std::unique_ptr<gateway::Gateway> make_gateway(const PipelineConfig& cfg, Role role);

}  // namespace f2s::cli
