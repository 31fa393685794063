#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

#include "qfb/commands.hpp"
#include "qfb/config.hpp"
#include "qfb/error.hpp"

namespace {

std::string flag_name(const std::string& key) {
  std::string f = "--";
  for (char c : key) f += c == '_' ? '-' : c;
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfb: emitter / microcavity / half-cavity feedback simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qfb::tool_version));

  std::string config_file;
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> help = {
      {"stationary", "dark stationary state on the mode grid"},
      {"evolve", "integrate the amplitude equations"},
      {"jacobian", "eigenmodes of the linearized dynamics"},
      {"roots", "real roots of the characteristic equation"},
      {"critical-r", "critical damping ratio (or the product law)"},
      {"sweep", "root branches versus log2 R"},
      {"check", "invariant self-check suite"}};

  for (const std::string& name : qfb::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("-c,--config", config_file, "key = value configuration file");
    for (const std::string& key : qfb::RunConfig::keys())
      sub->add_option_function<std::string>(
          flag_name(key), [&flags, key](const std::string& v) { flags[key] = v; },
          "override '" + key + "'");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qfb::exit_usage;
  }

  std::string chosen;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) chosen = name;

  try {
    qfb::RunConfig cfg;
    if (!config_file.empty()) cfg.load_file(config_file);
    for (const auto& [key, value] : flags) cfg.set(key, value);
    return qfb::run_command(chosen, cfg, std::cout);
  } catch (const qfb::Error& e) {
    std::cerr << qfb::error_json(e) << '\n';
    return e.category() == qfb::ErrorCategory::config ? qfb::exit_usage : qfb::exit_error;
  } catch (const std::exception& e) {
    std::cerr << qfb::error_json(e) << '\n';
    return qfb::exit_error;
  }
}
