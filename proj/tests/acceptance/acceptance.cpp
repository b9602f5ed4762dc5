// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bitt/bidir.hpp"
#include "bitt/conversion.hpp"
#include "bitt/oracle.hpp"
#include "bitt/reduction.hpp"
#include "bitt/surface.hpp"

namespace fs = std::filesystem;
using namespace bitt;

namespace {

struct Verdict {
  bool pass = true;
  std::string summary;
  std::vector<std::string> failures;

  void fail(std::string what) {
    pass = false;
    if (failures.size() < 5) failures.push_back(std::move(what));
  }
};

oracle::GenConfig config_for(std::uint64_t seed) {
  oracle::GenConfig cfg;
  cfg.seed = seed;
  return cfg;
}

std::string show(const Context& ctx, const Term& t) { return surface::print(t, ctx); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

constexpr unsigned kSuite = 500;

// Seeds for the correctness and completeness suites.
constexpr std::uint64_t kCorrectnessBase = 0;
constexpr std::uint64_t kCompletenessBase = 100000;

Verdict correctness() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  for (unsigned i = 0; i < kSuite; ++i) {
    const auto g = oracle::generate(config_for(kCorrectnessBase + i));
    if (auto bad = oracle::correctness_violation(g.ctx_derivation, g.term)) {
      v.fail("seed " + std::to_string(kCorrectnessBase + i) + ": " + *bad);
    }
  }
  const double secs = seconds_since(start);
  if (secs >= 60.0) v.fail("took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << kSuite << " subjects, " << secs << " s";
  v.summary = s.str();
  return v;
}

Verdict completeness() {
  Verdict v;
  unsigned lifted = 0;
  for (unsigned i = 0; i < kSuite; ++i) {
    const auto g = oracle::generate(config_for(kCompletenessBase + i));
    lifted += g.lifted ? 1 : 0;
    if (auto bad = oracle::completeness_violation(g.ctx, g.term, g.type)) {
      v.fail("seed " + std::to_string(kCompletenessBase + i) + ": " + *bad);
    }
  }
  if (lifted == 0) v.fail("no Cumul-lifted conclusions were generated");
  v.summary = std::to_string(kSuite) + " derivations, " + std::to_string(lifted) + " lifted";
  return v;
}

Verdict determinism() {
  Verdict v;
  unsigned differing = 0;
  for (unsigned i = 0; i < kSuite; ++i) {
    const std::uint64_t seed = kCorrectnessBase + i;
    const auto g = oracle::generate(config_for(seed));
    const Term a = infer(g.ctx, g.term).ty;
    const Term b = infer(g.ctx, g.term).ty;
    if (!alpha_eq(a, b)) v.fail("seed " + std::to_string(seed) + ": reruns disagree");

    auto low = config_for(seed);
    low.cumul_insert_prob = 0.0;
    auto high = config_for(seed);
    high.cumul_insert_prob = 1.0;
    const auto g0 = oracle::generate(low);
    const auto g1 = oracle::generate(high);
    if (!alpha_eq(g0.ctx, g1.ctx) || !alpha_eq(g0.term, g1.term)) {
      v.fail("seed " + std::to_string(seed) + ": subjects differ between lift settings");
      continue;
    }
    if (g0.lifted) v.fail("seed " + std::to_string(seed) + ": lift inserted at probability 0");
    if (!alpha_eq(g0.type, g1.type)) ++differing;
    const auto s0 = oracle::strip_cumul(g0.derivation);
    const auto s1 = oracle::strip_cumul(g1.derivation);
    if (!convertible(*s0->type, *s1->type)) {
      v.fail("seed " + std::to_string(seed) + ": stripped types not convertible: " +
             show(g0.ctx, *s0->type) + " vs " + show(g1.ctx, *s1->type));
    }
    const Term t0 = infer(g0.ctx, g0.term).ty;
    const Term t1 = infer(g1.ctx, g1.term).ty;
    if (!alpha_eq(t0, t1)) v.fail("seed " + std::to_string(seed) + ": inference differs");
  }
  v.summary = std::to_string(kSuite) + " subjects, " + std::to_string(differing) +
              " with a distinct lifted type";
  return v;
}

Verdict principality() {
  Verdict v;
  unsigned second_lifts = 0;
  for (unsigned i = 0; i < kSuite; ++i) {
    const auto cfg = config_for(kCompletenessBase + i);
    const auto g = oracle::generate(cfg);
    bool second = false;
    if (auto bad = oracle::principality_violation(g, cfg, &second)) {
      v.fail("seed " + std::to_string(cfg.seed) + ": " + *bad);
    }
    second_lifts += second ? 1 : 0;
  }
  if (second_lifts == 0) v.fail("no second lift was ever generated");
  v.summary = std::to_string(kSuite) + " instances, " + std::to_string(second_lifts) +
              " with a second lift";
  return v;
}

// Generated instances whose subject contains at least `min_redexes` redexes.
std::vector<oracle::Generated> with_redexes(unsigned count, std::size_t min_redexes,
                                            std::uint64_t base, unsigned* scanned) {
  std::vector<oracle::Generated> out;
  std::uint64_t seed = base;
  const std::uint64_t limit = base + 200000;
  while (out.size() < count && seed < limit) {
    auto cfg = config_for(seed++);
    cfg.max_depth = 5;
    auto g = oracle::generate(cfg);
    if (count_redexes(g.term) >= min_redexes) out.push_back(std::move(g));
  }
  *scanned = static_cast<unsigned>(seed - base);
  return out;
}

Verdict subject_reduction() {
  Verdict v;
  unsigned scanned = 0;
  const auto instances = with_redexes(kSuite, 1, 200000, &scanned);
  if (instances.size() < kSuite) v.fail("only " + std::to_string(instances.size()) + " found");
  for (const auto& g : instances) {
    const auto next = step(g.term);
    if (!next) {
      v.fail("no step from " + show(g.ctx, g.term));
      continue;
    }
    try {
      check(g.ctx, *next, g.type);
    } catch (const TypeError& e) {
      v.fail(show(g.ctx, g.term) + " -> " + show(g.ctx, *next) + ": " + e.what());
    }
  }
  v.summary = std::to_string(instances.size()) + " redex-bearing subjects (" +
              std::to_string(scanned) + " seeds scanned)";
  return v;
}

Verdict confluence() {
  Verdict v;
  unsigned scanned = 0;
  const auto instances = with_redexes(200, 2, 400000, &scanned);
  if (instances.size() < 200) v.fail("only " + std::to_string(instances.size()) + " found");
  std::mt19937_64 rng(6);
  unsigned steps_taken = 0;
  for (const auto& g : instances) {
    const unsigned k = std::uniform_int_distribution<unsigned>(1, 5)(rng);
    Term t = g.term;
    for (unsigned j = 0; j < k; ++j) {
      const std::size_t n = count_redexes(t);
      if (n < 2) break;
      const std::size_t at = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
      t = *reduce_at(t, at);
      ++steps_taken;
    }
    if (!alpha_eq(normalize(t), normalize(g.term))) {
      v.fail(show(g.ctx, g.term) + " diverges via " + show(g.ctx, t));
    }
  }
  v.summary = std::to_string(instances.size()) + " terms, " + std::to_string(steps_taken) +
              " non-leftmost steps";
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_tool(const std::string& args, const fs::path& cwd, const fs::path& scratch) {
  const fs::path out = scratch / "stdout";
  const fs::path err = scratch / "stderr";
  const std::string cmd = "cd " + quote(cwd.string()) + " && env -u BITT_FUEL " +
                          quote(BITT_BINARY) + " " + args + " >" + quote(out.string()) + " 2>" +
                          quote(err.string());
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

Verdict golden() {
  Verdict v;
  const fs::path dir = GOLDEN_DIR;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".bitt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  const fs::path scratch = fs::temp_directory_path() / ("bitt_golden_" + std::to_string(::getpid()));
  fs::create_directories(scratch);

  unsigned negatives = 0;
  for (const auto& file : files) {
    const std::string stem = file.stem().string();
    const fs::path base = dir / stem;
    const std::string extra = fs::exists(base.string() + ".args") ? trim(slurp(base.string() + ".args")) : "";
    const std::string args = (extra.empty() ? "" : extra + " ") + "check " + quote(file.filename().string());
    const int want_code = std::stoi(slurp(base.string() + ".exit"));
    const std::string want_out = slurp(base.string() + ".expected");
    const std::string want_err = slurp(base.string() + ".stderr");
    negatives += want_code != 0 ? 1 : 0;

    const RunResult first = run_tool(args, dir, scratch);
    const RunResult second = run_tool(args, dir, scratch);
    if (first.code != want_code) {
      v.fail(stem + ": exit " + std::to_string(first.code) + ", expected " + std::to_string(want_code));
    }
    if (first.out != want_out) v.fail(stem + ": stdout differs");
    if (first.err != want_err) v.fail(stem + ": stderr differs");
    if (first.code != second.code || first.out != second.out || first.err != second.err) {
      v.fail(stem + ": not stable across runs");
    }
  }
  fs::remove_all(scratch);

  if (files.size() < 25) v.fail("only " + std::to_string(files.size()) + " files");
  if (negatives < 8) v.fail("only " + std::to_string(negatives) + " negative files");
  // Every TypeError kind must be exercised by some negative file.
  std::string all_err;
  for (const auto& file : files) all_err += slurp(dir / (file.stem().string() + ".stderr"));
  for (const char* kind : {"UnboundVariable", "NotASort", "NotAProduct", "NotASigma", "NotANat",
                           "NotAnEq", "CumulFailed", "FuelExhausted"}) {
    if (all_err.find(std::string(": ") + kind + ":") == std::string::npos) {
      v.fail(std::string("no negative file covers ") + kind);
    }
  }
  v.summary = std::to_string(files.size()) + " files, " + std::to_string(negatives) +
              " negative, each run twice";
  return v;
}

Verdict annotated_redex() {
  Verdict v;
  const fs::path scratch = fs::temp_directory_path() / ("bitt_redex_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  const RunResult r =
      run_tool("check -e " + quote("(fun (x : Nat) => x) zero") + " -t Nat", scratch, scratch);
  fs::remove_all(scratch);
  if (r.code != 0) v.fail("exit " + std::to_string(r.code) + ": " + r.err);
  v.summary = "exit " + std::to_string(r.code) + ", printed \"" + trim(r.out) + "\"";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"correctness", correctness},
      {"completeness", completeness},
      {"determinism", determinism},
      {"principality", principality},
      {"subject reduction", subject_reduction},
      {"confluence", confluence},
      {"golden corpus", golden},
      {"annotated redex", annotated_redex},
  };
  bool all = true;
  int number = 0;
  for (const auto& [name, run] : criteria) {
    ++number;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << number << " " << name << ": " << v.summary
              << "\n";
    for (const auto& f : v.failures) std::cout << "    " << f << "\n";
    std::cout.flush();
  }
  return all ? 0 : 1;
}
