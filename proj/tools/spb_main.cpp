#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spb/channel_io.hpp"
#include "spb/exponents.hpp"
#include "spb/feasibility.hpp"
#include "spb/regions.hpp"
#include "spb/verify.hpp"

namespace {

using namespace spb;

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct RateGrid {
  std::vector<double> rx, ry;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_axis(const std::string& s) {
  double lo = 0, hi = 0;
  int steps = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3 || steps < 1)
    throw UsageError("--rates expects MIN:MAX:STEPS per axis");
  std::vector<double> v;
  for (int i = 0; i < steps; ++i)
    v.push_back(steps == 1 ? lo : lo + (hi - lo) * double(i) / double(steps - 1));
  return v;
}

RateGrid parse_rates(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw UsageError("--rates expects two comma-separated axes");
  return {parse_axis(s.substr(0, comma)), parse_axis(s.substr(comma + 1))};
}

std::vector<double> parse_pmf_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  return v;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << text;
}

std::string csv_header() { return "r_x,r_y,value,method,resolution,diagnostics\n"; }

void csv_row(std::string& out, double rx, double ry, double value,
             const std::string& method, int resolution,
             const std::string& diag) {
  out += fmt(rx) + "," + fmt(ry) + "," + fmt(value) + "," + method + "," +
         std::to_string(resolution) + "," + diag + "\n";
}

std::string solver_diag(const SolverDiagnostics& d, std::uint64_t seed) {
  std::ostringstream os;
  os << "iters=" << d.iterations << ";viol=" << fmt(d.constraint_violation)
     << ";gap=" << fmt(d.duality_gap) << ";lambda=" << fmt(d.lambda)
     << ";vacuous=" << (d.vacuous ? 1 : 0) << ";seed=" << seed;
  return os.str();
}

int run_capacity(const Mac& w, int resolution, const std::string& out_path,
                 std::uint64_t seed) {
  RegionApprox reg = region_approx(w, resolution);
  std::string out = csv_header();
  for (std::size_t i = 0; i < reg.bounds.size(); ++i) {
    const PentagonBounds& b = reg.bounds[i];
    std::ostringstream diag;
    diag << "point=" << i << ";seed=" << seed;
    csv_row(out, b.ix, b.iy, b.ixy, "pentagon", resolution, diag.str());
  }
  csv_row(out, 0.0, 0.0, max_sum_rate(reg), "max_sum_rate", resolution,
          "seed=" + std::to_string(seed));
  emit(out_path, out);
  return 0;
}

int run_exponent(const Mac& w, const RateGrid& grid, int resolution, int u_cap,
                 const std::vector<double>& p_fixed, const std::string& out_path,
                 std::uint64_t seed) {
  std::string out = csv_header();
  for (double rx : grid.rx)
    for (double ry : grid.ry) {
      RatePair r{rx, ry};
      ExponentResult t4 = sp_thm4(w, r, resolution);
      csv_row(out, rx, ry, t4.value, "sp_thm4", resolution,
              solver_diag(t4.diag, seed));
      ExponentResult t2 = sp_thm2(w, r, resolution, u_cap);
      csv_row(out, rx, ry, t2.value, "sp_thm2", resolution,
              solver_diag(t2.diag, seed));
      if (!p_fixed.empty()) {
        ExponentResult ft = sp_fixed_type(w, r, p_fixed);
        csv_row(out, rx, ry, ft.value, "fixed_type", resolution,
                solver_diag(ft.diag, seed));
      }
      auto tr = transfer_max_to_avg(0.0, t4.value, r);
      csv_row(out, rx, ry, tr.second, "transfer", resolution,
              "from=sp_thm4;seed=" + std::to_string(seed));
    }
  emit(out_path, out);
  return 0;
}

int run_oracle(const Mac& w, int n, int mx, int my,
               std::optional<std::uint64_t> seed, std::uint64_t samples,
               const std::string& out_path, const std::string& code_out) {
  BestCodeResult best = best_code_search(w, n, mx, my, nullptr, nullptr, seed,
                                         samples);
  std::string out = csv_header();
  std::ostringstream diag;
  diag << "n=" << n << ";mx=" << mx << ";my=" << my
       << ";examined=" << best.examined
       << ";exhaustive=" << (best.exhaustive ? 1 : 0)
       << ";max_error=" << fmt(best.report.maximal)
       << ";seed=" << (seed ? std::to_string(*seed) : std::string("none"));
  csv_row(out, best.code.rate_x(), best.code.rate_y(), best.report.average,
          "best_code", n, diag.str());
  emit(out_path, out);
  if (!code_out.empty()) save_code(code_out, best.code, w);
  return 0;
}

int run_verify(const Mac& w, const std::string& code_path, double threshold,
               const std::string& out_path) {
  MultiUserCode code = load_code(code_path, w);
  ChainReport rep = verify_chain_A1(code, w);
  std::ostringstream os;
  os << "overall=" << (rep.overall ? "true" : "false") << "\n";
  os << "e_avg=" << fmt(rep.e_avg) << "\n";
  os << "bound_xy=" << fmt(rep.bound_xy) << "\n";
  os << "bound_x=" << fmt(rep.bound_x) << "\n";
  os << "bound_y=" << fmt(rep.bound_y) << "\n";
  for (const ChainStep& st : rep.steps)
    os << "step." << st.id << "=" << (st.holds ? "holds" : "FAILS")
       << ";left=" << fmt(st.left) << ";right=" << fmt(st.right) << "\n";
  for (const std::string& f : rep.flags) os << "flag=" << f << "\n";
  if (threshold > 0.0) {
    try {
      SubcodeResult sub = extract_subcode_A3(code, w, threshold);
      os << "a3.kept=" << sub.kept.size() << "\n";
      os << "a3.trimmed=" << (sub.trimmed_y ? "y" : "x") << "\n";
      ErrorReport sr = evaluate(sub.code, w);
      os << "a3.max_pair_error=" << fmt(sr.maximal) << "\n";
    } catch (const ValidationError& e) {
      os << "a3.skipped=" << e.what() << "\n";
    }
  }
  emit(out_path, os.str());
  return rep.overall ? 0 : 2;
}

int run_repair(const Mac& w, const std::string& code_path,
               const std::string& out_path) {
  MultiUserCode code = load_code(code_path, w);
  MultiUserCode fixed = repair(code, w);
  if (out_path.empty())
    std::cout << code_to_text(fixed, w);
  else
    save_code(out_path, fixed, w);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sphere-packing bounds for two-user multiple-access channels"};
  app.require_subcommand(1);

  std::string channel_path, rates_str = "0:0:1,0:0:1", out_path, code_path,
              code_out, p_fixed_str;
  int resolution = 8, u_cap = 0, n = 2, mx = 2, my = 2;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t samples = 0;
  double threshold = 0.0;

  app.add_option("--channel", channel_path, "channel file")->required();
  app.add_option("--rates", rates_str, "RXMIN:RXMAX:STEPS,RYMIN:RYMAX:STEPS");
  app.add_option("--resolution", resolution, "outer grid resolution");
  app.add_option("--u-cap", u_cap, "max mixture components for U");
  app.add_option("--seed", seed, "random seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--out", out_path, "output path (stdout when absent)");

  CLI::App* cap = app.add_subcommand("capacity", "achievable-region CSV");
  cap->fallthrough();
  CLI::App* expn = app.add_subcommand("exponent", "sphere-packing bound CSV");
  expn->fallthrough();
  expn->add_option("--p-xy", p_fixed_str, "fixed joint type, comma separated");
  CLI::App* orc = app.add_subcommand("oracle", "exhaustive best-code search");
  orc->fallthrough();
  orc->add_option("--n", n, "blocklength");
  orc->add_option("--mx", mx, "codebook size, sender X");
  orc->add_option("--my", my, "codebook size, sender Y");
  orc->add_option("--samples", samples, "sampled codebooks when space too large");
  orc->add_option("--code-out", code_out, "write the best code here");
  CLI::App* ver = app.add_subcommand("verify", "chain verification report");
  ver->fallthrough();
  ver->add_option("--code", code_path, "code file")->required();
  ver->add_option("--threshold", threshold, "also run subcode extraction");
  CLI::App* rep = app.add_subcommand("repair", "repair a bad codebook");
  rep->fallthrough();
  rep->add_option("--code", code_path, "code file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    Mac w = load_channel(channel_path);
    if (u_cap <= 0) u_cap = default_u_cap(w);
    if (cap->parsed()) return run_capacity(w, resolution, out_path, seed);
    if (expn->parsed()) {
      std::vector<double> p_fixed;
      if (!p_fixed_str.empty()) p_fixed = parse_pmf_list(p_fixed_str);
      return run_exponent(w, parse_rates(rates_str), resolution, u_cap, p_fixed,
                          out_path, seed);
    }
    if (orc->parsed())
      return run_oracle(w, n, mx, my,
                        seed_set ? std::optional<std::uint64_t>(seed)
                                 : std::nullopt,
                        samples, out_path, code_out);
    if (ver->parsed()) return run_verify(w, code_path, threshold, out_path);
    if (rep->parsed()) return run_repair(w, code_path, out_path);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
