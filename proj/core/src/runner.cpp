#include "resonator/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "resonator/errors.hpp"
#include "resonator/thermo.hpp"
#include "resonator/wordops.hpp"

namespace resonator {

using nlohmann::json;

namespace {

json zero_to_json(const ZeroEntry& z) {
  json j;
  j["re"] = z.s.real();
  j["im"] = z.s.imag();
  j["multiplicity"] = z.multiplicity;
  j["newtonResidual"] = z.newtonResidual;
  switch (z.tag) {
    case ZeroEntry::Tag::Old:
      j["classification"] = "old";
      break;
    case ZeroEntry::Tag::New:
      j["classification"] = "new";
      break;
    case ZeroEntry::Tag::Unclassified:
      j["classification"] = "unclassified";
      break;
  }
  return j;
}

json report_json_value(const ResonanceReport& r) {
  json j;
  j["rep"] = r.repLabel;
  j["rectangle"] = {{"reMin", r.rectangle.reMin}, {"reMax", r.rectangle.reMax},
                    {"imMin", r.rectangle.imMin}, {"imMax", r.rectangle.imMax},
                    {"M", r.rectangle.M}};
  j["windingTotal"] = r.windingTotal;
  json zeros = json::array();
  for (const auto& z : r.zeros) zeros.push_back(zero_to_json(z));
  j["zeros"] = zeros;
  return j;
}

// JSON numbers are dumped by nlohmann with shortest round-trip formatting,
// which preserves all 17 significant digits.
std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct SubRect {
  int index;
  double reMin, reMax, imMin, imMax;
};

std::vector<SubRect> partition(const ScanRectangle& rect) {
  std::vector<SubRect> cells;
  const int nRe = rect.gridRe - 1;
  const int nIm = rect.gridIm - 1;
  cells.reserve(static_cast<std::size_t>(nRe) * nIm);
  for (int a = 0; a < nRe; ++a) {
    for (int b = 0; b < nIm; ++b) {
      SubRect c;
      c.index = a * nIm + b;
      c.reMin = rect.reMin + rect.width() * a / nRe;
      c.reMax = rect.reMin + rect.width() * (a + 1) / nRe;
      c.imMin = rect.imMin + rect.height() * b / nIm;
      c.imMax = rect.imMin + rect.height() * (b + 1) / nIm;
      cells.push_back(c);
    }
  }
  return cells;
}

struct CellResult {
  int index = 0;
  int winding = 0;
  std::vector<ZeroEntry> zeros;
};

json cell_to_json(const CellResult& c, std::uint64_t configHash,
                  const SubRect& rect) {
  json j;
  j["configHash"] = configHash;
  j["index"] = c.index;
  j["rect"] = {rect.reMin, rect.reMax, rect.imMin, rect.imMax};
  j["winding"] = c.winding;
  json zeros = json::array();
  for (const auto& z : c.zeros) zeros.push_back(zero_to_json(z));
  j["zeros"] = zeros;
  return j;
}

CellResult cell_from_json(const json& j, std::uint64_t configHash) {
  if (j.at("configHash").get<std::uint64_t>() != configHash) {
    throw ConfigMismatch("checkpoint belongs to a different config");
  }
  CellResult c;
  c.index = j.at("index").get<int>();
  c.winding = j.at("winding").get<int>();
  for (const auto& zj : j.at("zeros")) {
    ZeroEntry z;
    z.s = Complex(zj.at("re").get<double>(), zj.at("im").get<double>());
    z.multiplicity = zj.at("multiplicity").get<int>();
    z.newtonResidual = zj.at("newtonResidual").get<double>();
    c.zeros.push_back(z);
  }
  return c;
}

}  // namespace

ResonanceReport scan_with_checkpoint(const SchottkyData& s,
                                     const ScanRectangle& rect,
                                     const Twist& twist, double tol,
                                     int workers,
                                     const std::string& checkpointPath,
                                     std::uint64_t configHash) {
  rect.validate();
  const std::vector<SubRect> cells = partition(rect);
  std::map<int, CellResult> done;

  if (!checkpointPath.empty()) {
    std::ifstream in(checkpointPath);
    std::string line;
    while (in && std::getline(in, line)) {
      if (line.empty()) continue;
      const CellResult c = cell_from_json(json::parse(line), configHash);
      done[c.index] = c;
    }
  }

  std::optional<std::ofstream> checkpoint;
  if (!checkpointPath.empty()) {
    checkpoint.emplace(checkpointPath, std::ios::app);
  }

  std::vector<const SubRect*> pending;
  for (const auto& c : cells) {
    if (!done.count(c.index)) pending.push_back(&c);
  }
  auto scan_cell = [&](const SubRect& cell) {
    ScanRectangle sub = rect;
    sub.reMin = cell.reMin;
    sub.reMax = cell.reMax;
    sub.imMin = cell.imMin;
    sub.imMax = cell.imMax;
    const ResonanceReport r = locate_zeros(s, sub, twist, rect.M, tol);
    CellResult out;
    out.index = cell.index;
    out.winding = r.windingTotal;
    out.zeros = r.zeros;
    return out;
  };
  std::size_t next = 0;
  const std::size_t pool = std::max(1, workers);
  while (next < pending.size()) {
    const std::size_t batch = std::min(pool, pending.size() - next);
    std::vector<std::future<CellResult>> futures;
    for (std::size_t b = 0; b < batch; ++b) {
      const SubRect* cell = pending[next + b];
      futures.push_back(
          std::async(std::launch::async, [&scan_cell, cell]() { return scan_cell(*cell); }));
    }
    for (std::size_t b = 0; b < batch; ++b) {
      CellResult r = futures[b].get();
      // A checkpoint line is written only once the cell's result is complete.
      if (checkpoint) {
        *checkpoint << cell_to_json(r, configHash, *pending[next + b]).dump()
                    << "\n";
        checkpoint->flush();
      }
      done[r.index] = std::move(r);
    }
    next += batch;
  }

  ResonanceReport report;
  report.rectangle = rect;
  report.repLabel = twist.label;
  int windingSum = 0;
  std::vector<ZeroEntry> zeros;
  for (const auto& [index, cell] : done) {
    windingSum += cell.winding;
    zeros.insert(zeros.end(), cell.zeros.begin(), cell.zeros.end());
  }
  std::sort(zeros.begin(), zeros.end(), [](const ZeroEntry& a, const ZeroEntry& b) {
    if (a.s.real() != b.s.real()) return a.s.real() < b.s.real();
    return a.s.imag() < b.s.imag();
  });
  // Cells are inflated by locate_zeros when a zero hugs a shared edge, so the
  // same zero can surface in two neighbouring cells; drop near-duplicates and
  // reconcile the winding sum.
  std::vector<ZeroEntry> dedup;
  int dropped = 0;
  for (const auto& z : zeros) {
    if (!dedup.empty() && std::abs(dedup.back().s - z.s) <= 10.0 * tol) {
      dropped += z.multiplicity;
      continue;
    }
    dedup.push_back(z);
  }
  report.zeros = std::move(dedup);
  report.windingTotal = windingSum - dropped;
  int multSum = 0;
  for (const auto& z : report.zeros) multSum += z.multiplicity;
  if (multSum != report.windingTotal) {
    throw ContourAmbiguity("scan multiplicities disagree with cell windings");
  }
  return report;
}

std::string report_to_json(const ResonanceReport& report) {
  return dump(report_json_value(report));
}

std::string cover_scan_to_json(const CoverScan& scan) {
  json j;
  j["epsilon"] = scan.epsilon;
  j["delta"] = scan.delta;
  j["empiricalEta"] = scan.empiricalEta;
  j["base"] = report_json_value(scan.baseReport);
  json reps = json::array();
  for (const auto& r : scan.irrepReports) reps.push_back(report_json_value(r));
  j["irreps"] = reps;
  json nz = json::array();
  for (const auto& z : scan.newZeros) nz.push_back(zero_to_json(z));
  j["newZeros"] = nz;
  return dump(j);
}

std::string det_grid_csv(const SchottkyData& s, const ScanRectangle& rect,
                         const Twist& twist) {
  const DetEvaluator eval(s, twist, rect.M);
  std::ostringstream out;
  out << "re,im,absdet,argdet\n";
  for (int a = 0; a < rect.gridRe; ++a) {
    for (int b = 0; b < rect.gridIm; ++b) {
      const double re =
          rect.reMin + rect.width() * a / std::max(1, rect.gridRe - 1);
      const double im =
          rect.imMin + rect.height() * b / std::max(1, rect.gridIm - 1);
      const Complex det = eval.det(Complex(re, im));
      out << format_double(re) << ',' << format_double(im) << ','
          << format_double(std::abs(det)) << ','
          << format_double(std::arg(det)) << "\n";
    }
  }
  return out.str();
}

namespace {

void add_check(std::vector<VerifyCheck>& checks, const std::string& name,
               bool pass, const std::string& detail) {
  checks.push_back(VerifyCheck{name, pass, detail});
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(const SchottkyData& s) {
  std::vector<VerifyCheck> checks;

  // Word counting identities.
  {
    bool ok = true;
    std::string detail;
    for (int m = 1; m <= 3 && ok; ++m) {
      for (int N = 1; N <= 6 && ok; ++N) {
        std::uint64_t closed = 2 * m;
        for (int i = 1; i < N; ++i) closed *= 2 * m - 1;
        const auto counted = count_words(m, N, WordFilter::all());
        std::uint64_t brute = 0;
        for_each_word(m, N, WordFilter::all(),
                      [&](std::span<const int>) { ++brute; });
        ok = counted == closed && brute == closed;
        if (!ok) detail = "m=" + std::to_string(m) + " N=" + std::to_string(N);
      }
    }
    add_check(checks, "word-counts", ok, detail);
  }

  // Chain-rule derivative against central differences.
  {
    const auto words = enumerate_words(s.m, 4, WordFilter::not_ending_in(0));
    const double x = s.disks[0].center + 0.3 * s.disks[0].radius;
    const double h = 1e-6 * s.disks[0].radius;
    double worst = 0.0;
    for (std::size_t i = 0; i < words.size() && i < 5; ++i) {
      const auto dv = word_derivative(s, words[i], Complex(x, 0.0), 0);
      const Complex num = (apply_word(s, words[i], Complex(x + h, 0.0)) -
                           apply_word(s, words[i], Complex(x - h, 0.0))) /
                          (2.0 * h);
      worst = std::max(worst, std::abs(num - dv.value) / std::abs(dv.value));
    }
    add_check(checks, "word-derivative-fd", worst <= 1e-7,
              "max rel err " + format_double(worst));
  }

  // Weight normalization.
  if (s.m >= 2) {
    const int M = 24;
    const CollocationGrid grid(s, M);
    const double delta = hausdorff_dimension(s, 1e-8, M);
    const RpfData rpf = rpf_data(s, delta / 2.0, M);
    const auto pts = limit_points(s, 4, 3);
    double worst = 0.0;
    for (const auto& p : pts) {
      for (int N = 1; N <= 4; ++N) {
        double sum = 0.0;
        for (const auto& [w, value] : weights(s, rpf, grid, p, N)) sum += value;
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
    add_check(checks, "weight-normalization", worst <= 1e-8,
              "max |sum-1| " + format_double(worst));
  }

  // Recursion and closed-form norms on S3 irreps.
  {
    auto g = build_dihedral(3);
    const GroupHom hom = make_hom(g, {1, 3});
    bool ok = true;
    std::string detail;
    for (const auto& rho : irreps(hom.group)) {
      const Twist t = twist_from_hom(hom, rho);
      for (int N = 1; N <= 6 && ok; ++N) {
        const auto brute = word_operator(t, WordFilter::all(), N);
        const auto rec = wn_recursion(t, N);
        if ((brute.matrix - rec.matrix).norm() > 1e-10) {
          ok = false;
          detail = "recursion " + rho.label + " N=" + std::to_string(N);
        }
        const double closed = wn_norm_closed_form(t, N);
        if (std::abs(closed - brute.norm()) >
            1e-9 * std::max(1.0, brute.norm())) {
          ok = false;
          detail = "closed-form " + rho.label + " N=" + std::to_string(N);
        }
      }
    }
    add_check(checks, "word-operator-identities", ok, detail);
  }

  // Z set decomposition.
  {
    auto g = build_cyclic(3);
    const GroupHom hom = make_hom(g, {1, 2});
    const auto reps = irreps(hom.group);
    const Twist t = twist_from_hom(hom, reps[1]);
    bool ok = true;
    for (int N = 2; N <= 5 && ok; ++N) {
      for (int l = 0; l < 2 * hom.m() && ok; ++l) {
        for (int j = 0; j < 2 * hom.m() && ok; ++j) {
          const auto zset = word_operator(t, WordFilter::z_set(l, j), N);
          Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(t.dim, t.dim);
          for (int jp = 0; jp < 2 * hom.m(); ++jp) {
            if (jp == j) continue;
            sum += word_operator(
                       t, WordFilter::first_last(inverse_letter(l, hom.m()), jp), N)
                       .matrix;
          }
          ok = (zset.matrix - sum).norm() <= 1e-12;
        }
      }
    }
    add_check(checks, "zset-decomposition", ok, "");
  }

  // Euler product vs Fredholm determinant.
  if (s.m >= 2) {
    const Complex det = fredholm_det(s, Complex(3.0, 0.0), trivial_twist(s.m), 24);
    double tail = 0.0;
    const Complex euler = zeta_euler(s, Complex(3.0, 0.0), trivial_twist(s.m),
                                     8, 30, &tail);
    const double rel = std::abs(det - euler) / std::abs(euler);
    add_check(checks, "euler-vs-fredholm", rel <= 1e-6,
              "rel gap " + format_double(rel));
  }

  // Venkov-Zograf at Z/2.
  if (s.m >= 2) {
    const GroupHom hom = make_hom(build_cyclic(2), {1, 1});
    const double gap =
        venkov_zograf_check(s, hom, {Complex(2.0, 0.0), Complex(2.0, 1.0)}, 16);
    add_check(checks, "venkov-zograf-z2", gap <= 1e-7,
              "max rel gap " + format_double(gap));
  }

  // Normalized operator fixes constants.
  if (s.m >= 2) {
    const double res = normalized_identity_residual(s, 0.25, 24);
    add_check(checks, "normalized-identity", res <= 1e-8,
              "residual " + format_double(res));
  }

  // No zeros to the right of delta.
  if (s.m >= 2) {
    const double delta = hausdorff_dimension(s, 1e-8, 16);
    ScanRectangle rect;
    rect.reMin = delta + 1e-3;
    rect.reMax = delta + 0.5;
    rect.imMin = -2.0;
    rect.imMax = 2.0;
    rect.M = 16;
    const int n = count_zeros(s, rect, trivial_twist(s.m), rect.M);
    add_check(checks, "patterson-half-plane", n == 0,
              "count " + std::to_string(n));
  }

  return checks;
}

namespace {

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::path p = dir.empty() ? std::filesystem::path(name)
                                        : std::filesystem::path(dir) / name;
  if (!dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
  }
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << content;
}

Twist resolve_twist(const SchottkyData& s, const RunConfig& c) {
  switch (c.rep.kind) {
    case RepSelector::Kind::Trivial:
      return trivial_twist(s.m);
    case RepSelector::Kind::Character:
      return character_twist(s.m, c.rep.theta);
    case RepSelector::Kind::Regular: {
      if (!c.group) throw ConfigError("regular rep needs a group spec");
      const GroupHom hom = resolve_hom(s, *c.group);
      return twist_from_hom(hom, regular_rep(hom.group));
    }
    case RepSelector::Kind::IrrepIndex: {
      if (!c.group) throw ConfigError("irrep selector needs a group spec");
      const GroupHom hom = resolve_hom(s, *c.group);
      const auto list = irreps(hom.group);
      if (c.rep.index < 0 || c.rep.index >= static_cast<int>(list.size())) {
        throw ConfigError("irrep index out of range");
      }
      return twist_from_hom(hom, list[c.rep.index]);
    }
    case RepSelector::Kind::AllNontrivial:
      throw ConfigError("all-nontrivial applies only to cover-scan");
  }
  throw ConfigError("unresolved rep selector");
}

int cmd_dimension(const RunConfig& c, std::ostream& out) {
  const SchottkyData s = build_schottky(c.surface);
  DimensionTrace trace;
  const double delta = hausdorff_dimension(s, c.tol, c.nodes, &trace);
  out << "delta " << format_double(delta) << "\n";
  for (const auto& [sigma, p] : trace.bracketTrace) {
    out << "bracket sigma=" << format_double(sigma)
        << " P=" << format_double(p) << "\n";
  }
  std::ostringstream csv;
  csv << "sigma,pressure\n";
  for (const auto& [sigma, p] : trace.bracketTrace) {
    csv << format_double(sigma) << ',' << format_double(p) << "\n";
  }
  write_file(c.outDir, "dimension.csv", csv.str());
  return 0;
}

int cmd_zeta_eval(const RunConfig& c, std::ostream& out) {
  const SchottkyData s = build_schottky(c.surface);
  const Twist twist = resolve_twist(s, c);
  json j;
  j["s"] = {c.point.real(), c.point.imag()};
  j["rep"] = twist.label;
  const std::vector<int> ladder = {16, 24, 32, 48};
  json table = json::array();
  Complex detAt{};
  for (int M : ladder) {
    const DetEvaluator eval(s, twist, M);
    const DetResult r = eval.det_and_derivative(c.point);
    if (M == c.nodes) detAt = r.det;
    table.push_back(json{{"M", M},
                         {"detRe", r.det.real()},
                         {"detIm", r.det.imag()},
                         {"dlogRe", r.logDerivative.real()},
                         {"dlogIm", r.logDerivative.imag()}});
  }
  if (std::find(ladder.begin(), ladder.end(), c.nodes) == ladder.end()) {
    const DetEvaluator eval(s, twist, c.nodes);
    detAt = eval.det(c.point);
  }
  j["det"] = {detAt.real(), detAt.imag()};
  j["convergence"] = table;
  const std::string text = dump(j);
  out << text;
  write_file(c.outDir, "zeta-eval.json", text);
  return 0;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
  const SchottkyData s = build_schottky(c.surface);
  const Twist twist = resolve_twist(s, c);
  const ResonanceReport report =
      scan_with_checkpoint(s, c.rectangle, twist, c.tol, c.workers,
                           c.checkpointPath, c.hash());
  const std::string text = report_to_json(report);
  out << text;
  write_file(c.outDir, "scan.json", text);
  write_file(c.outDir, "scan-grid.csv", det_grid_csv(s, c.rectangle, twist));
  return 0;
}

int cmd_cover_scan(const RunConfig& c, std::ostream& out) {
  if (!c.group) throw ConfigError("cover-scan needs a group spec");
  const SchottkyData s = build_schottky(c.surface);
  const GroupHom hom = resolve_hom(s, *c.group);
  const CoverScan scan = new_zero_scan(s, hom, c.rectangle, c.tol, c.workers);
  const std::string text = cover_scan_to_json(scan);
  out << text;
  write_file(c.outDir, "cover-scan.json", text);
  return 0;
}

int cmd_expansion(const RunConfig& c, std::ostream& out) {
  if (!c.group) throw ConfigError("expansion needs a group spec");
  const SchottkyData s = build_schottky(c.surface);
  const GroupHom hom = resolve_hom(s, *c.group);
  const ExpansionReport rep = expansion_report(hom);
  out << "epsilon " << format_double(rep.epsilon) << "\n";
  std::ostringstream csv;
  csv << "eigenvalue\n";
  for (double l : rep.nontrivialSpectrum) csv << format_double(l) << "\n";
  write_file(c.outDir, "expansion.csv", csv.str());
  return 0;
}

int cmd_wordnorm(const RunConfig& c, std::ostream& out) {
  if (!c.group) throw ConfigError("wordnorm needs a group spec");
  const SchottkyData s = build_schottky(c.surface);
  const GroupHom hom = resolve_hom(s, *c.group);
  const auto list = irreps(hom.group);
  int index = c.rep.kind == RepSelector::Kind::IrrepIndex ? c.rep.index : 1;
  if (index < 0 || index >= static_cast<int>(list.size())) {
    throw ConfigError("irrep index out of range");
  }
  const Twist t = twist_from_hom(hom, list[index]);
  const double eps = expansion_epsilon(hom);
  std::ostringstream csv;
  csv << "N,words,normBrute,normClosed,aSetMax,reference\n";
  const int Nmax = std::min(10, c.maxWordLength);
  for (int N = 1; N <= Nmax; ++N) {
    const double words =
        static_cast<double>(count_words(s.m, N, WordFilter::all()));
    const double closed = wn_norm_closed_form(t, N);
    double brute = -1.0;
    double aMax = -1.0;
    if (words <= 2e5) {
      brute = word_operator(t, WordFilter::all(), N).norm();
      aMax = 0.0;
      for (int i = 0; i < 2 * s.m; ++i) {
        for (int j = 0; j < 2 * s.m; ++j) {
          if (count_words(s.m, N, WordFilter::first_last(i, j)) == 0) continue;
          aMax = std::max(
              aMax, word_operator(t, WordFilter::first_last(i, j), N).norm());
        }
      }
    }
    csv << N << ',' << format_double(words) << ',' << format_double(brute)
        << ',' << format_double(closed) << ',' << format_double(aMax) << ','
        << format_double(std::exp(-eps * N / 4.0)) << "\n";
  }
  out << csv.str();
  write_file(c.outDir, "wordnorm.csv", csv.str());
  return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const SchottkyData s = build_schottky(c.surface);
  const auto checks = run_verify_suite(s);
  bool allPass = true;
  for (const auto& check : checks) {
    out << (check.pass ? "[PASS] " : "[FAIL] ") << check.name;
    if (!check.detail.empty()) out << " (" << check.detail << ")";
    out << "\n";
    allPass = allPass && check.pass;
  }
  return allPass ? 0 : 2;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  if (config.command == "dimension") return cmd_dimension(config, out);
  if (config.command == "zeta-eval") return cmd_zeta_eval(config, out);
  if (config.command == "scan") return cmd_scan(config, out);
  if (config.command == "cover-scan") return cmd_cover_scan(config, out);
  if (config.command == "expansion") return cmd_expansion(config, out);
  if (config.command == "wordnorm") return cmd_wordnorm(config, out);
  if (config.command == "verify") return cmd_verify(config, out);
  throw ConfigError("unknown command '" + config.command + "'");
}

}  // namespace resonator
