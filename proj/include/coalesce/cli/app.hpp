#pragma once

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coalesce/cli/config.hpp"
#include "coalesce/cli/jobs.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <unistd.h>
#endif

namespace coalesce::cli {

enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kConfigError = 2 };

/// Raised for config problems detected outside the numerical library.
class UsageError : public Error {
 public:
  UsageError(const std::string& what, std::vector<std::string> errors = {})
      : Error("config_error", what), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + p.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Applies `a.b.c=value` to `config`; the value is parsed as JSON when it
/// parses, otherwise kept as a string.
inline void apply_override(Json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key.path=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw UsageError("--set: empty path component in '" + key + "'");
    if (!node->is_object()) throw UsageError("--set: '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

/// Loads, overrides and validates a config; errors become UsageError.
inline JobConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  const std::string text = read_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    const auto r = validate_text(text);
    throw UsageError("invalid config '" + path.string() + "'", r.errors);
  }
  if (!j.is_object()) throw UsageError("invalid config '" + path.string() + "'", {"$: must be an object"});
  for (const auto& o : overrides) apply_override(j, o);
  auto r = validate(std::move(j));
  if (!r.ok()) throw UsageError("invalid config '" + path.string() + "'", r.errors);
  return std::move(*r.config);
}

namespace detail {

inline std::string secondary_suffix(const Artifact& a) {
  if (a.role == "report") return ".json";
  if (a.role == "fidelity_csv") return "_fidelity.csv";
  return "_" + a.role + fs::path(a.path).extension().string();
}

}  // namespace detail

/// Resolves artifact paths against `--out`. A path with an extension names
/// the first artifact and the others are derived from its stem; otherwise
/// `--out` is a directory receiving the configured file names.
inline void resolve_outputs(std::vector<Artifact>& artifacts, const std::optional<fs::path>& out) {
  if (out) {
    if (out->has_extension() && !fs::is_directory(*out)) {
      const fs::path base = out->parent_path() / out->stem();
      for (std::size_t i = 0; i < artifacts.size(); ++i)
        artifacts[i].path = i == 0 ? *out : fs::path(base.string() + detail::secondary_suffix(artifacts[i]));
    } else {
      for (auto& a : artifacts) a.path = *out / a.path.filename();
    }
  }
  std::set<fs::path> seen;
  for (const auto& a : artifacts)
    if (!seen.insert(a.path.lexically_normal()).second)
      throw UsageError("output path '" + a.path.string() + "' is used by two artifacts");
}

/// Writes every artifact to a temporary sibling, then renames them into
/// place. On failure no temporary or partial file is left behind.
inline void write_atomically(const std::vector<Artifact>& artifacts) {
#if defined(__unix__) || defined(__APPLE__)
  const std::string tag = ".tmp." + std::to_string(::getpid());
#else
  const std::string tag = ".tmp";
#endif
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  try {
    for (const auto& a : artifacts) {
      if (a.path.has_parent_path()) fs::create_directories(a.path.parent_path());
      fs::path tmp = a.path;
      tmp += tag;
      temps.push_back(tmp);
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      f << a.content;
      f.close();
      if (!f) throw Error("io_error", "cannot write '" + tmp.string() + "'");
    }
    for (std::size_t i = 0; i < artifacts.size(); ++i) fs::rename(temps[i], artifacts[i].path);
  } catch (const fs::filesystem_error& e) {
    cleanup();
    throw Error("io_error", e.what());
  } catch (...) {
    cleanup();
    throw;
  }
}

inline Json error_json(const std::string& kind, const std::string& message, int code,
                       const std::vector<std::string>& errors = {}, Json extras = Json::object()) {
  Json e{{"kind", kind}, {"message", message}};
  if (!errors.empty()) e["errors"] = errors;
  for (auto& [k, v] : extras.items()) e[k] = v;
  return Json{{"error", e}, {"exit_code", code}, {"tool", io::tool_info()}};
}

/// Exit code of a library error: configuration problems are 2, numerical ones 1.
inline int exit_code_for(const Error& e) {
  const auto& k = e.kind();
  if (k == "invalid_spec" || k == "configuration_error" || k == "config_error") return kConfigError;
  return kNumericalFailure;
}

inline int report_error(std::ostream& err, const Json& j) {
  err << j.dump(2) << "\n";
  return j["exit_code"].get<int>();
}

inline const std::vector<std::string>& job_subcommands() {
  static const std::vector<std::string> v{"spectrum", "ep-scan", "theorem-check", "evolve", "ladder-analytic"};
  return v;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Non-Hermitian lattice models: degeneracies, exceptional points and dynamics", "coalesce"};
  app.set_version_flag("--version", std::string("coalesce ") + COALESCE_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  bool print_schema = false;

  for (const auto& name : job_subcommands()) {
    auto* sub = app.add_subcommand(name, "Run a " + name + " job");
    sub->add_option("-c,--config", config_path, "Job config (JSON)")->required();
    sub->add_option("-o,--out", out_path, "Output file (others derive from its stem) or directory");
    sub->add_option("--set", overrides, "Override a config key: key.path=value");
  }
  auto* figs = app.add_subcommand("make-figures", "Write the canonical configs into a directory");
  figs->add_option("-o,--out", out_path, "Target directory")->required();
  auto* val = app.add_subcommand("validate", "Validate a config and print it with defaults applied");
  val->add_option("-c,--config", config_path, "Job config (JSON)");
  val->add_option("-o,--out", out_path, "Write the normalized config here instead of stdout");
  val->add_option("--set", overrides, "Override a config key: key.path=value");
  val->add_flag("--schema", print_schema, "Print the config schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    out << (e.get_exit_code() == 0 ? app.help() : "");
    if (app.get_option("--version")->count() > 0) out << "coalesce " << COALESCE_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, error_json("usage_error", e.what(), kConfigError));
  }

  const std::optional<fs::path> out_opt = out_path.empty() ? std::nullopt : std::optional<fs::path>(out_path);
  try {
    if (figs->parsed()) {
      std::vector<Artifact> artifacts;
      for (const auto& [name, cfg] : canonical_configs()) artifacts.push_back({"config", *out_opt / name, cfg.dump(2) + "\n"});
      write_atomically(artifacts);
      return kOk;
    }
    if (val->parsed()) {
      if (print_schema) {
        out << SchemaValidator::embedded().schema().dump(2) << "\n";
        return kOk;
      }
      if (config_path.empty()) throw UsageError("validate needs --config or --schema");
      const auto cfg = load_config(config_path, overrides);
      const std::string text = cfg.normalized.dump(2) + "\n";
      if (out_opt)
        write_atomically({{"config", *out_opt, text}});
      else
        out << text;
      return kOk;
    }
    const std::string sub = app.get_subcommands().front()->get_name();
    const auto cfg = load_config(config_path, overrides);
    if (cfg.kind != sub)
      throw UsageError("config job kind does not match the subcommand",
                       {"$.job.kind: is '" + cfg.kind + "' but the subcommand is '" + sub + "'"});
    auto artifacts = run_job(cfg);
    resolve_outputs(artifacts, out_opt);
    write_atomically(artifacts);
    return kOk;
  } catch (const UsageError& e) {
    return report_error(err, error_json(e.kind(), e.what(), kConfigError, e.errors()));
  } catch (const IntegrationFailure& e) {
    return report_error(err, error_json(e.kind(), e.what(), kNumericalFailure, {},
                                        Json{{"last_good_time", e.last_good_time()}}));
  } catch (const ConvergenceFailure& e) {
    return report_error(err, error_json(e.kind(), e.what(), kNumericalFailure, {},
                                        Json{{"matrix_norm", e.matrix_norm()}, {"iterations", e.iterations()}}));
  } catch (const Error& e) {
    return report_error(err, error_json(e.kind(), e.what(), exit_code_for(e)));
  } catch (const std::exception& e) {
    return report_error(err, error_json("numerical_failure", e.what(), kNumericalFailure));
  }
}

}  // namespace coalesce::cli
