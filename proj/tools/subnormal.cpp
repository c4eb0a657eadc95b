#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "subnormal/cli/commands.hpp"

namespace fs = std::filesystem;
using namespace subnormal::cli;

namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CommandResult run_file(const std::string& command, const fs::path& path, const GlobalOptions& global) {
  const auto text = read_file(path);
  if (!text) {
    return {kExitUsage, {{"tool", "subnormal"},
                         {"version", kToolVersion},
                         {"command", command},
                         {"status", "error"},
                         {"error", {{"code", "UsageError"}, {"message", "cannot read " + path.string()}}}}};
  }
  return run_instance_command(command, *text, global);
}

// One worker per hardware thread, each pulling the next file index.
CommandResult run_batch(const std::string& command, const fs::path& dir, const GlobalOptions& global) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) return {kExitUsage, {{"status", "error"}, {"error", {{"message", "cannot list " + dir.string()}}}}};
  std::sort(files.begin(), files.end());

  std::vector<CommandResult> results(files.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(files.size(), 1));
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < files.size(); i = next++) results[i] = run_file(command, files[i], global);
    });
  }
  pool.clear();

  Json entries = Json::array();
  int exit_code = kExitSuccess;
  for (std::size_t i = 0; i < files.size(); ++i) {
    exit_code = worst_exit(exit_code, results[i].exit_code);
    entries.push_back({{"file", files[i].filename().string()}, {"exit_code", results[i].exit_code},
                       {"report", std::move(results[i].report)}});
  }
  return {exit_code, {{"tool", "subnormal"}, {"version", kToolVersion}, {"command", command}, {"batch", std::move(entries)}}};
}

std::string summary(const Json& report, int exit_code) {
  std::ostringstream out;
  out << report.value("command", std::string("batch")) << ": exit " << exit_code;
  if (report.contains("decision")) out << ", decision " << report["decision"].get<std::string>();
  if (report.contains("pass")) out << ", " << (report["pass"].get<bool>() ? "PASS" : "FAIL");
  if (report.contains("label")) out << ", " << report["label"].get<std::string>();
  if (report.contains("error")) out << ", " << report["error"].value("message", std::string());
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-generation subnormal completion solver on directed trees"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  bool pretty = false;
  std::optional<double> tol;
  std::string output;
  std::string batch;
  app.add_flag("--pretty", pretty, "Indented JSON plus a one-line summary on stderr");
  app.add_option("--tol", tol, "Verification tolerance")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "Write the report to this path");
  app.add_option("--batch", batch, "Run the command on every *.json file in a directory")->check(CLI::ExistingDirectory);

  std::string instance_path;
  for (const char* name : {"solve", "beta", "verify", "classify-flat", "one-gen"}) {
    auto* sub = app.add_subcommand(name, std::string("Run ") + name + " on an instance file");
    sub->add_option("instance", instance_path, "Instance JSON file");
  }
  auto* stampfli = app.add_subcommand("stampfli", "Stampfli completion of a weight triple");
  std::vector<double> triple;
  std::vector<double> params;
  std::size_t n = 6;
  auto* triple_opt = stampfli->add_option("--triple", triple, "x y z")->expected(3);
  auto* params_opt = stampfli->add_option("--params", params, "x r theta")->expected(3);
  triple_opt->excludes(params_opt);
  stampfli->add_option("--n", n, "Number of tail weights")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const GlobalOptions global{tol};
  const std::string command = app.get_subcommands().front()->get_name();
  CommandResult result{kExitUsage, {}};
  if (command == "stampfli") {
    StampfliRequest request;
    if (!triple.empty()) request.triple = std::array<double, 3>{triple[0], triple[1], triple[2]};
    if (!params.empty()) request.params = std::array<double, 3>{params[0], params[1], params[2]};
    request.n = n;
    result = cmd_stampfli(request);
  } else if (!batch.empty()) {
    result = run_batch(command, batch, global);
  } else if (!instance_path.empty()) {
    result = run_file(command, instance_path, global);
  } else {
    std::cerr << command << ": an instance file or --batch <dir> is required\n";
    return kExitUsage;
  }

  const std::string text = pretty ? result.report.dump(2) : result.report.dump();
  if (pretty) std::cerr << summary(result.report, result.exit_code) << '\n';
  if (output.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << output << '\n';
      return kExitUsage;
    }
    out << text << '\n';
  }
  return result.exit_code;
}
