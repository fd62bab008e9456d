// Acceptance gate: one line per criterion, nonzero exit if any fail.
// Criteria 1-9 are graded from the verification suite's per-check verdicts;
// criterion 10 runs the full suite through the CLI twice and requires exit 0,
// a wall-clock budget, and byte-identical reports across the two runs.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectropt/cli.hpp"
#include "spectropt/io.hpp"
#include "spectropt/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CheckDoc {
  bool pass = false;
  std::map<std::string, double> numbers;
  std::string detail;
};

std::map<std::string, CheckDoc> load_checks(const std::string& dir) {
  std::map<std::string, CheckDoc> docs;
  if (!fs::is_directory(dir)) return docs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("check-", 0) != 0) continue;
    const json j = json::parse(spectropt::io::read_text_file(entry.path()));
    CheckDoc doc;
    doc.pass = j.at("pass").get<bool>();
    doc.detail = j.value("detail", "");
    for (const auto& [k, v] : j.at("numbers").items())
      doc.numbers[k] = v.get<double>();
    docs[j.at("name").get<std::string>()] = doc;
  }
  return docs;
}

int g_criterion = 0;
int g_failures = 0;

void report(bool pass, const std::string& label, const std::string& context) {
  ++g_criterion;
  if (!pass) ++g_failures;
  std::printf("[%2d/10] %s %s%s%s\n", g_criterion, pass ? "PASS" : "FAIL",
              label.c_str(), context.empty() ? "" : ": ", context.c_str());
  std::fflush(stdout);
}

std::string num(const std::map<std::string, CheckDoc>& docs,
                const std::string& check, const std::string& key) {
  auto it = docs.find(check);
  if (it == docs.end()) return "?";
  auto jt = it->second.numbers.find(key);
  if (jt == it->second.numbers.end()) return "?";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", jt->second);
  return buf;
}

bool all_pass(const std::map<std::string, CheckDoc>& docs,
              const std::vector<std::string>& names, std::string* why) {
  bool ok = true;
  for (const std::string& n : names) {
    auto it = docs.find(n);
    if (it == docs.end()) {
      ok = false;
      *why += n + " missing; ";
    } else if (!it->second.pass) {
      ok = false;
      *why += n + " failed (" + it->second.detail + "); ";
    }
  }
  return ok;
}

bool reports_identical(const std::string& dir_a, const std::string& dir_b) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const std::string name = entry.path().filename().string();
    if (name == "metadata.json") continue;  // timestamps live here by design
    names.push_back(name);
  }
  for (const std::string& name : names) {
    const fs::path pb = fs::path(dir_b) / name;
    if (!fs::exists(pb)) return false;
    if (spectropt::io::read_text_file((fs::path(dir_a) / name).string()) !=
        spectropt::io::read_text_file(pb.string()))
      return false;
  }
  return true;
}

}  // namespace

int main() {
  const std::string dir_a = "acceptance_run_a";
  const std::string dir_b = "acceptance_run_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  spectropt::cli::Options opt;
  opt.out_dir = dir_a;
  opt.seed = 1;

  std::printf("running the verification suite (full, seed 1)...\n");
  std::fflush(stdout);
  const auto t0 = std::chrono::steady_clock::now();
  const int exit_a = spectropt::cli::cmd_verify(opt);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const auto docs = load_checks(dir_a);

  std::string why;

  // 1. analytic oracles
  why.clear();
  {
    const bool ok = all_pass(
        docs, {"oracle-interval", "oracle-disk", "oracle-oscillator"}, &why);
    report(ok, "analytic oracles (interval, disk, oscillator)",
           ok ? "interval lambda_1 rel err " +
                    num(docs, "oracle-interval", "err1") +
                    ", disk lambda_1 rel err " + num(docs, "oracle-disk", "err1")
              : why);
  }

  // 2. scaling identities
  why.clear();
  {
    const bool ok = all_pass(docs, {"scaling"}, &why);
    report(ok, "scaling identities at t = 2",
           ok ? "worst rel err " + num(docs, "scaling", "worst") + " <= 1e-6"
              : why);
  }

  // 3. explicit sup-norm constant
  why.clear();
  {
    const bool ok = all_pass(docs, {"eigen-linf"}, &why);
    report(ok, "eigenfunction sup bound 1.04059 lambda^(d/4) x 1.05",
           ok ? "worst lhs/rhs " + num(docs, "eigen-linf", "worst_ratio") : why);
  }

  // 4. inequality suite
  why.clear();
  {
    const bool ok = all_pass(docs,
                             {"lemma41-gap", "lemma43-halfspace",
                              "lemma33-truncation", "lemma34-resolvent"},
                             &why);
    report(ok, "inequality suite (gap, halfspace, truncation, resolvent)",
           ok ? "10 pairs + 12 cuts + truncation family + ratio " +
                    num(docs, "lemma34-resolvent", "worst_ratio")
              : why);
  }

  // 5. concentration-compactness classifier
  why.clear();
  {
    const bool ok = all_pass(docs, {"cc-classify"}, &why);
    report(ok, "cc classifier on 9 sequences + translation",
           ok ? num(docs, "cc-classify", "correct") + "/" +
                    num(docs, "cc-classify", "total") + " correct"
              : why);
  }

  // 6. ground state optimality
  why.clear();
  {
    const bool ok = all_pass(docs, {"faber-krahn"}, &why);
    report(ok, "ground state optimizer (three seeds, radial, constrained)",
           ok ? "seed spread " + num(docs, "faber-krahn", "seed_spread") +
                    ", kkt " + num(docs, "faber-krahn", "kkt_residual")
              : why);
  }

  // 7. torsion-constrained ground state
  why.clear();
  {
    const bool ok = all_pass(docs, {"kohler-jobin"}, &why);
    report(ok, "disk minimizes lambda_1 P^(1/2); optimizer level set round",
           ok ? "disk merit err " + num(docs, "kohler-jobin", "disk_ref_err") +
                    ", iso ratio " + num(docs, "kohler-jobin", "iso_ratio")
              : why);
  }

  // 8. subsolution audits + gradient check
  why.clear();
  {
    const bool ok = all_pass(docs, {"subsolution-audit"}, &why);
    report(ok, "optimizer outputs are numerical subsolutions; FD gradient 1%",
           ok ? "worst violation " +
                    num(docs, "subsolution-audit", "worst_violation") +
                    ", fd err " +
                    num(docs, "subsolution-audit", "worst_fd_mismatch")
              : why);
  }

  // 9. dichotomy spectrum identity
  why.clear();
  {
    const bool ok = all_pass(docs, {"dichotomy-split"}, &why);
    report(ok, "split wells: merged spectrum = sorted union",
           ok ? "worst rel err " + num(docs, "dichotomy-split", "worst_rel_err")
              : why);
  }

  // 10. suite exit code, runtime, determinism
  {
    opt.out_dir = dir_b;
    const int exit_b = spectropt::cli::cmd_verify(opt);
    const bool identical = reports_identical(dir_a, dir_b);
    const bool ok =
        exit_a == 0 && exit_b == 0 && elapsed < 600.0 && identical;
    char ctx[160];
    std::snprintf(ctx, sizeof ctx,
                  "exit %d/%d, %.1f s (budget 600), reports %s", exit_a,
                  exit_b, elapsed, identical ? "byte-identical" : "DIFFER");
    report(ok, "full verify suite: exit 0, runtime, determinism", ctx);
  }

  std::printf("ACCEPTANCE: %d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
