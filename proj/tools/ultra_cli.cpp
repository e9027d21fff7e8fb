#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ultracoarse.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitInvalid = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open \"" << path << "\"\n";
    std::exit(kExitInvalid);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write \"" << path << "\"\n";
    std::exit(kExitInvalid);
  }
  out << text;
}

[[noreturn]] void die(uc_status status) {
  std::cerr << "error: " << uc_last_error() << "\n";
  std::exit(static_cast<int>(status));
}

struct SpaceHandle {
  uc_space* h = nullptr;
  explicit SpaceHandle(const std::string& path) {
    auto status = uc_space_parse(read_file(path).c_str(), &h);
    if (status != UC_OK) die(status);
  }
  ~SpaceHandle() { uc_space_free(h); }
  SpaceHandle(const SpaceHandle&) = delete;
  SpaceHandle& operator=(const SpaceHandle&) = delete;
};

struct TowerHandle {
  uc_tower* h = nullptr;
  TowerHandle() = default;
  ~TowerHandle() { uc_tower_free(h); }
  TowerHandle(const TowerHandle&) = delete;
  TowerHandle& operator=(const TowerHandle&) = delete;
};

std::string take(char* s) {
  std::string out = s ? s : "";
  uc_string_free(s);
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int run_pipeline(bool equivalence, const std::string& x_path,
                 const std::string& y_path, std::uint64_t depth,
                 std::uint64_t seed, const std::string& cert_path) {
  SpaceHandle X(x_path), Y(y_path);
  char* out = nullptr;
  auto status = equivalence ? uc_equiv(X.h, Y.h, depth, seed, &out)
                            : uc_embed(X.h, Y.h, depth, seed, &out);
  if (status != UC_OK) die(status);
  auto verdict_text = take(out);
  std::cout << verdict_text;
  if (!cert_path.empty()) {
    auto verdict = Json::parse(verdict_text);
    if (verdict.at("certificate").is_null()) {
      std::cerr << "note: verdict carries no certificate; \"" << cert_path
                << "\" not written\n";
    } else {
      write_file(cert_path, dump(verdict.at("certificate")));
    }
  }
  return 0;
}

int run_verify(const std::string& cert_path, const std::string& x_path,
               const std::string& y_path, const std::string& scales) {
  SpaceHandle X(x_path), Y(y_path);
  auto cert_text = read_file(cert_path);
  char* out = nullptr;
  auto status = uc_verify(cert_text.c_str(), X.h, Y.h,
                          scales.empty() ? nullptr : scales.c_str(), &out);
  if (status != UC_OK) die(status);
  auto report_text = take(out);
  std::cout << report_text;
  auto report = Json::parse(report_text);
  if (!report.at("accepted").get<bool>()) {
    std::cerr << "certificate rejected: "
              << report.at("failure").get<std::string>() << "\n";
    return 3;
  }
  return 0;
}

int run_oracle(const std::string& space_path, const std::string& tower_path) {
  Json reports = Json::array();
  bool clean = true;
  if (!space_path.empty()) {
    SpaceHandle X(space_path);
    char* out = nullptr;
    auto status = uc_oracle_space(X.h, &out);
    if (status != UC_OK) die(status);
    auto report = Json::parse(take(out));
    clean = clean && report.at("mismatches").empty();
    reports.push_back(std::move(report));
  }
  if (!tower_path.empty()) {
    TowerHandle T;
    auto status = uc_tower_parse(read_file(tower_path).c_str(), &T.h);
    if (status != UC_OK) die(status);
    char* out = nullptr;
    status = uc_oracle_tower(T.h, &out);
    if (status != UC_OK) die(status);
    auto report = Json::parse(take(out));
    clean = clean && report.at("mismatches").empty();
    reports.push_back(std::move(report));
  }
  std::cout << dump(reports);
  if (!clean) {
    std::cerr << "oracle found mismatches\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse classification of ultrametric spaces"};
  app.require_subcommand(1);

  std::string degrees_path, space_path, x_path, y_path, cert_path, out_path;
  std::string tower_path, scales, kappa, format = "json";
  std::uint64_t depth = 6, seed = 0;

  auto* inv = app.add_subcommand(
      "invariants", "flat/sharp covering invariants of a space");
  auto* inv_deg = inv->add_option("--degrees", degrees_path,
                                  "degree-sequence JSON file");
  auto* inv_space = inv->add_option("--space", space_path, "space JSON file");
  inv_deg->excludes(inv_space);

  auto* equiv = app.add_subcommand(
      "equiv", "decide coarse equivalence, constructively when possible");
  auto* embed = app.add_subcommand(
      "embed", "construct a coarse embedding certificate");
  for (auto* cmd : {equiv, embed}) {
    cmd->add_option("--x", x_path, "left space JSON file")->required();
    cmd->add_option("--y", y_path, "right space JSON file")->required();
    cmd->add_option("--depth", depth, "truncation/search depth");
    cmd->add_option("--seed", seed, "sampling seed");
    cmd->add_option("--cert", cert_path, "write the certificate here");
  }

  auto* verify = app.add_subcommand(
      "verify", "re-check a certificate against two spaces");
  verify->add_option("--cert", cert_path, "certificate JSON file")->required();
  verify->add_option("--x", x_path, "left space JSON file")->required();
  verify->add_option("--y", y_path, "right space JSON file")->required();
  verify->add_option("--scales", scales, "comma list of rational scales");
  verify->add_option("--depth", depth,
                     "accepted for symmetry; verification is deterministic");
  verify->add_option("--seed", seed,
                     "accepted for symmetry; verification is deterministic");

  auto* model = app.add_subcommand(
      "model", "degree sequence of the homogeneous model for a cardinal");
  model->add_option("kappa", kappa, "cardinal, e.g. 2 or aleph1")->required();
  model->add_option("--out", out_path, "also write the degree sequence here");

  auto* canon = app.add_subcommand(
      "canonical-tower", "ball tower of a finite space over given scales");
  canon->add_option("--space", space_path, "space JSON file")->required();
  canon->add_option("--scales", scales,
                    "comma list of radii (default: realized scales)");
  canon->add_option("--format", format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}));
  canon->add_option("--out", out_path, "also write the output here");

  auto* oracle = app.add_subcommand(
      "oracle", "brute-force cross-checks against the fast paths");
  oracle->add_option("--space", space_path, "finite space JSON file");
  oracle->add_option("--tower", tower_path, "explicit tower JSON file");

  auto* export_dot = app.add_subcommand("export-dot", "render a tower as DOT");
  export_dot->add_option("--tower", tower_path, "tower JSON file")->required();
  export_dot->add_option("--out", out_path, "also write the DOT here");

  CLI11_PARSE(app, argc, argv);

  if (inv->parsed()) {
    auto path = degrees_path.empty() ? space_path : degrees_path;
    if (path.empty()) {
      std::cerr << "error: invariants needs --degrees or --space\n";
      return kExitInvalid;
    }
    SpaceHandle X(path);
    char* out = nullptr;
    auto status = uc_space_invariants(X.h, &out);
    if (status != UC_OK) die(status);
    std::cout << take(out);
    return 0;
  }
  if (equiv->parsed() || embed->parsed()) {
    return run_pipeline(equiv->parsed(), x_path, y_path, depth, seed,
                        cert_path);
  }
  if (verify->parsed()) return run_verify(cert_path, x_path, y_path, scales);
  if (model->parsed()) {
    char* out = nullptr;
    auto status = uc_model(kappa.c_str(), &out);
    if (status != UC_OK) die(status);
    auto text = take(out);
    std::cout << text;
    if (!out_path.empty()) write_file(out_path, text);
    return 0;
  }
  if (canon->parsed()) {
    SpaceHandle X(space_path);
    TowerHandle T;
    auto status = uc_canonical_tower(
        X.h, scales.empty() ? nullptr : scales.c_str(), &T.h);
    if (status != UC_OK) die(status);
    char* out = nullptr;
    status = format == "dot" ? uc_tower_to_dot(T.h, &out)
                             : uc_tower_to_json(T.h, &out);
    if (status != UC_OK) die(status);
    auto text = take(out);
    std::cout << text;
    if (!out_path.empty()) write_file(out_path, text);
    return 0;
  }
  if (oracle->parsed()) {
    if (space_path.empty() && tower_path.empty()) {
      std::cerr << "error: oracle needs --space and/or --tower\n";
      return kExitInvalid;
    }
    return run_oracle(space_path, tower_path);
  }
  if (export_dot->parsed()) {
    TowerHandle T;
    auto status = uc_tower_parse(read_file(tower_path).c_str(), &T.h);
    if (status != UC_OK) die(status);
    char* out = nullptr;
    status = uc_tower_to_dot(T.h, &out);
    if (status != UC_OK) die(status);
    auto text = take(out);
    std::cout << text;
    if (!out_path.empty()) write_file(out_path, text);
    return 0;
  }
  return kExitInvalid;
}
