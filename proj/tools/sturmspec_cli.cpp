#include "sturmspec/asymptotics.hpp"
#include "sturmspec/audit.hpp"
#include "sturmspec/bandtree.hpp"
#include "sturmspec/config.hpp"
#include "sturmspec/dimension.hpp"
#include "sturmspec/errors.hpp"
#include "sturmspec/gibbs.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace sturm;

namespace {

struct SharedOpts {
  RunConfig flagged;
  std::string config_path;
  std::string out_path;
  CLI::Option* alpha = nullptr;
  CLI::Option* coupling = nullptr;
  CLI::Option* order = nullptr;
  CLI::Option* bits = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* seed = nullptr;
};

void add_shared(CLI::App* sub, SharedOpts& s) {
  s.alpha = sub->add_option("--alpha", s.flagged.alpha,
                            "frequency: per:a1,a2,... or [0;a1,...,(b1,...)]");
  s.coupling = sub->add_option("--V", s.flagged.V, "coupling constant (> 20)");
  s.order = sub->add_option("--order", s.flagged.order,
                            "deepest generation to enumerate");
  s.bits = sub->add_option("--precision-bits", s.flagged.precision_bits,
                           "working mantissa bits (>= 64)");
  s.tol = sub->add_option("--bisect-rel-tol", s.flagged.bisect_rel_tol,
                          "relative endpoint tolerance for band bisection");
  s.threads =
      sub->add_option("--threads", s.flagged.threads, "worker thread count");
  s.seed = sub->add_option("--seed", s.flagged.seed,
                           "seed for the audit sampling streams");
  sub->add_option("--config", s.config_path, "key=value configuration file");
  sub->add_option("--out", s.out_path, "write the report here (default stdout)");
}

// defaults, then the config file, then explicit flags
RunConfig resolve(const SharedOpts& s) {
  RunConfig cfg;
  if (!s.config_path.empty()) load_config_file(s.config_path, cfg);
  if (s.alpha->count()) cfg.alpha = s.flagged.alpha;
  if (s.coupling->count()) cfg.V = s.flagged.V;
  if (s.order->count()) cfg.order = s.flagged.order;
  if (s.bits->count()) cfg.precision_bits = s.flagged.precision_bits;
  if (s.tol->count()) cfg.bisect_rel_tol = s.flagged.bisect_rel_tol;
  if (s.threads->count()) cfg.threads = s.flagged.threads;
  if (s.seed->count()) cfg.seed = s.flagged.seed;
  return cfg;
}

struct OutSink {
  explicit OutSink(const std::string& path) {
    if (!path.empty()) {
      file.emplace(path);
      if (!*file) throw Error(errc::io_failure, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file ? *file : std::cout; }
  std::optional<std::ofstream> file;
};

BandTree make_tree(const RunConfig& cfg) {
  return BandTree(ContinuedFraction::parse(cfg.alpha),
                  SpectralParams(real_from_serial(cfg.V), cfg.precision_bits),
                  real_from_serial(cfg.bisect_rel_tol));
}

void print_header(std::ostream& os, const char* cmd, const RunConfig& cfg) {
  os << "# " << cmd << " alpha=" << ContinuedFraction::parse(cfg.alpha).canonical()
     << " V=" << to_serial(real_from_serial(cfg.V)) << " order=" << cfg.order
     << " precision_bits=" << cfg.precision_bits
     << " bisect_rel_tol=" << to_serial(real_from_serial(cfg.bisect_rel_tol))
     << " hash=" << hash_hex(semantic_hash(cfg)) << "\n";
}

json band_record(const BandTree& tree, std::size_t k, const Band& b) {
  json rec;
  rec["order"] = b.order;
  rec["kind"] = band_kind_name(b.kind);
  rec["level"] = b.level;
  rec["power"] = b.power;
  rec["l"] = b.index_l;
  rec["path"] = b.path;
  rec["lo"] = to_serial(b.lo);
  rec["hi"] = to_serial(b.hi);
  rec["parent_path"] =
      b.parent < 0 ? ""
                   : tree.generation(k - 1)[static_cast<std::size_t>(b.parent)]
                         .path;
  return rec;
}

void write_dump(std::ostream& os, const BandTree& tree, const RunConfig& cfg,
                std::size_t up_to) {
  json header;
  header["kind"] = "band-dump";
  header["alpha"] = tree.cf().canonical();
  header["V"] = to_serial(tree.params().V);
  header["order"] = up_to;
  header["precision_bits"] = cfg.precision_bits;
  header["bisect_rel_tol"] = to_serial(tree.bisect_rel_tol());
  header["config_hash"] = hash_hex(semantic_hash(cfg));
  os << header.dump() << "\n";
  for (std::size_t k = 0; k <= up_to; ++k)
    for (const Band& b : tree.generation(k))
      os << band_record(tree, k, b).dump() << "\n";
}

// Pulls previously dumped generations into the tree. Any mismatch in the
// digest or record structure abandons the cache with a warning; the caller
// then enumerates from scratch. Never partially restores.
bool try_restore(BandTree& tree, const std::string& path,
                 const RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) return false;  // absent cache: will be created on the way out
  const auto warn = [&](const std::string& why) {
    std::cerr << "warning: ignoring cache " << path << ": " << why << "\n";
    return false;
  };
  std::string line;
  if (!std::getline(in, line)) return warn("empty file");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("kind", "") != "band-dump")
    return warn("not a band dump");
  if (header.value("config_hash", "") != hash_hex(semantic_hash(cfg)))
    return warn("configuration digest mismatch");

  std::vector<std::vector<Band>> gens;
  std::map<std::string, long> prev, cur;
  long order = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) return warn("unreadable record");
    Band b;
    std::string pp;
    try {
      b.order = rec.at("order").get<long>();
      const std::string kind = rec.at("kind").get<std::string>();
      if (kind == "I")
        b.kind = BandKind::I;
      else if (kind == "II")
        b.kind = BandKind::II;
      else if (kind == "III")
        b.kind = BandKind::III;
      else
        return warn("unknown band kind " + kind);
      b.level = rec.at("level").get<std::size_t>();
      b.power = rec.at("power").get<long>();
      b.index_l = rec.at("l").get<unsigned>();
      b.path = rec.at("path").get<std::string>();
      b.lo = real_from_serial(rec.at("lo").get<std::string>());
      b.hi = real_from_serial(rec.at("hi").get<std::string>());
      pp = rec.at("parent_path").get<std::string>();
    } catch (const json::exception& e) {
      return warn(std::string("malformed record: ") + e.what());
    }
    // advance the generation window before resolving the parent: records
    // of order k reference paths from the generation just completed
    if (b.order == order + 1) {
      prev = std::move(cur);
      cur.clear();
      ++order;
      gens.emplace_back();
    } else if (b.order != order) {
      return warn("record order out of sequence");
    }
    if (gens.empty()) gens.emplace_back();
    if (pp.empty()) {
      b.parent = -1;
    } else {
      const auto it = prev.find(pp);
      if (it == prev.end()) return warn("dangling parent " + pp);
      b.parent = it->second;
    }
    cur.emplace(b.path, static_cast<long>(gens.back().size()));
    gens.back().push_back(std::move(b));
  }
  if (gens.empty()) return warn("no records");
  try {
    for (auto& g : gens) tree.restore_generation(std::move(g));
  } catch (const Error& e) {
    return warn(e.what());
  }
  return true;
}

int run_bands(const RunConfig& cfg, const std::string& cache_path,
              std::ostream& os) {
  BandTree tree = make_tree(cfg);
  bool restored = false;
  if (!cache_path.empty()) restored = try_restore(tree, cache_path, cfg);
  tree.enumerate(cfg.order, cfg.threads);
  write_dump(os, tree, cfg, cfg.order);
  if (!cache_path.empty()) {
    // refresh with everything enumerated, which is never shallower than
    // what the cache held before
    std::ofstream out(cache_path);
    if (!out) throw Error(errc::io_failure, "cannot write " + cache_path);
    write_dump(out, tree, cfg, tree.depth());
    (void)restored;
  }
  return 0;
}

int run_dims(const RunConfig& cfg, std::ostream& os) {
  BandTree tree = make_tree(cfg);
  tree.enumerate(cfg.order, cfg.threads);
  const DimensionReport rep = dimension_report(tree);
  print_header(os, "dims", cfg);
  os << "n0 " << rep.n0 << "\n";
  os << "order s residual\n";
  for (const auto& [n, s] : rep.s_seq)
    os << n << " " << to_serial(s) << " " << to_serial(rep.residuals.at(n))
       << "\n";
  os << "tail orders=" << rep.tail_orders << " s_low=" << to_serial(rep.s_low)
     << " s_high=" << to_serial(rep.s_high) << "\n";
  os << "bounds lower=" << to_serial(rep.bounds.lower)
     << " upper=" << to_serial(rep.bounds.upper) << "\n";
  for (const auto& [r, count] : rep.moran_counts)
    os << "moran r=" << to_serial(r) << " count=" << count << "\n";
  if (rep.slope_fit)
    os << "slope " << to_serial(*rep.slope_fit) << "\n";
  else
    os << "slope n/a\n";
  try {
    const std::string bd = to_serial(box_dim_estimate(rep));
    os << "box_dim " << bd << "\n";
  } catch (const Error& e) {
    if (e.code() != errc::insufficient_depth) throw;
    os << "box_dim n/a\n";
  }
  if (rep.degenerate) os << "degenerate true\n";
  return 0;
}

int run_gibbs(const RunConfig& cfg, const std::string& beta_str, long k_max_in,
              std::ostream& os) {
  BandTree tree = make_tree(cfg);
  tree.enumerate(cfg.order, cfg.threads);
  const std::size_t m = cfg.order;
  const Real beta = beta_str.empty() ? dimension_report(tree).s_high
                                     : real_from_serial(beta_str);
  std::size_t k_max;
  if (k_max_in < 0)
    k_max = m >= 3 ? m - 3 : 0;
  else
    k_max = static_cast<std::size_t>(k_max_in);
  if (k_max + 3 > m)
    throw Error(errc::invalid_config,
                "k_max must leave three orders below it (k_max <= order - 3)");
  print_header(os, "gibbs", cfg);
  os << "beta " << to_serial(beta) << "\n";
  const GibbsRatioReport ratios = gibbs_ratio_report(tree, beta, k_max, m);
  for (const auto& row : ratios.rows)
    os << "ratio k=" << row.k << " min=" << to_serial(row.min_ratio)
       << " max=" << to_serial(row.max_ratio) << "\n";
  os << "stability c_hat=" << to_serial(stability_constant(tree, beta, k_max))
     << "\n";
  const GibbsMeasure meas = build_measure(tree, beta, m);
  const auto& leaves = tree.generation(m);
  os << "weights order=" << m << " count=" << leaves.size() << "\n";
  for (std::size_t i = 0; i < leaves.size(); ++i)
    os << leaves[i].path << " " << to_serial(meas.mass[m][i]) << "\n";
  return 0;
}

int run_asym(const RunConfig& cfg, const std::string& v_list,
             std::ostream& os) {
  const ContinuedFraction cf = ContinuedFraction::parse(cfg.alpha);
  std::vector<Real> couplings;
  if (v_list.empty()) {
    couplings.push_back(real_from_serial(cfg.V));
  } else {
    std::stringstream ss(v_list);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) couplings.push_back(real_from_serial(item));
    if (couplings.empty())
      throw Error(errc::invalid_config, "empty coupling list");
  }
  const Real fs = f_star(cf);
  const auto rows =
      large_v_law(cf, couplings, cfg.order, cfg.precision_bits,
                  real_from_serial(cfg.bisect_rel_tol), cfg.threads);
  print_header(os, "asym", cfg);
  os << "f_star " << to_serial(fs) << "\n";
  os << "V,order,s,s_ln_v,target,gap\n";
  for (const auto& row : rows)
    os << to_serial(row.V) << "," << cfg.order << "," << to_serial(row.s)
       << "," << to_serial(row.s_ln_v) << "," << to_serial(row.target) << ","
       << to_serial(row.gap) << "\n";
  return 0;
}

int run_audit(const RunConfig& cfg, const std::string& suite,
              const std::string& checks, std::ostream& os) {
  AuditOptions aopt;
  aopt.threads = cfg.threads;
  aopt.seed = cfg.seed;
  if (!checks.empty()) {
    std::stringstream ss(checks);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t pos = 0;
        const int id = std::stoi(item, &pos);
        if (pos != item.size()) throw std::invalid_argument(item);
        aopt.selection.push_back(id);
      } catch (const std::exception&) {
        throw Error(errc::invalid_config, "bad check id: " + item);
      }
    }
  } else if (suite == "hard") {
    for (int id = 1; id <= 12; ++id)
      if (is_hard_check(id)) aopt.selection.push_back(id);
  } else if (suite == "soft") {
    for (int id = 1; id <= 12; ++id)
      if (!is_hard_check(id)) aopt.selection.push_back(id);
  } else if (suite != "all") {
    throw Error(errc::invalid_config, "suite must be all, hard, or soft");
  }
  BandTree tree = make_tree(cfg);
  tree.enumerate(cfg.order, cfg.threads);
  const auto reports = run_suite(tree, aopt);
  print_header(os, "audit", cfg);
  bool any_hard = false;
  for (const auto& r : reports) {
    any_hard = any_hard || r.hard;
    os << "check " << r.id << " " << r.name << " "
       << (r.hard ? "hard" : "soft") << " "
       << (r.insufficient ? "insufficient" : (r.pass ? "pass" : "FAIL"))
       << " population=" << r.population;
    os << " extreme=" << r.extreme.str(6, std::ios_base::scientific);
    if (r.has_bound)
      os << " bound=" << r.bound.str(6, std::ios_base::scientific);
    if (!r.extreme_label.empty()) os << " measures=\"" << r.extreme_label
                                    << "\"";
    if (!r.worst.empty()) os << " worst=\"" << r.worst << "\"";
    if (!r.note.empty()) os << " note=\"" << r.note << "\"";
    os << "\n";
  }
  const bool hard_ok = all_hard_pass(reports);
  if (any_hard)
    os << "hard_suite " << (hard_ok ? "PASS" : "FAIL") << "\n";
  else
    os << "hard_suite not-selected\n";
  return any_hard && !hard_ok ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral generating band hierarchy toolkit"};
  app.require_subcommand(1);

  SharedOpts so_bands, so_dims, so_gibbs, so_asym, so_audit;
  std::string cache_path, beta_str, v_list, suite = "all", checks;
  long k_max = -1;

  CLI::App* bands =
      app.add_subcommand("bands", "enumerate bands and dump them as records");
  add_shared(bands, so_bands);
  bands->add_option("--cache", cache_path,
                    "band dump reused and refreshed across runs");

  CLI::App* dims = app.add_subcommand(
      "dims", "pre-dimensions, tail estimates, bracket, covering counts");
  add_shared(dims, so_dims);

  CLI::App* gibbs = app.add_subcommand(
      "gibbs", "finite-order measure, comparison ratios, leaf weights");
  add_shared(gibbs, so_gibbs);
  gibbs->add_option("--beta", beta_str,
                    "measure exponent (default: tail pre-dimension)");
  gibbs->add_option("--k-max", k_max, "deepest order in the ratio report");

  CLI::App* asym = app.add_subcommand(
      "asym", "coupling asymptotics: s ln V against the limit constant");
  add_shared(asym, so_asym);
  asym->add_option("--V-list", v_list, "comma-separated couplings");

  CLI::App* audit =
      app.add_subcommand("audit", "run the numbered inequality checks");
  add_shared(audit, so_audit);
  audit->add_option("--suite", suite, "all, hard, or soft");
  audit->add_option("--checks", checks, "comma-separated check ids (1..12)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const SharedOpts* so = nullptr;
    if (bands->parsed())
      so = &so_bands;
    else if (dims->parsed())
      so = &so_dims;
    else if (gibbs->parsed())
      so = &so_gibbs;
    else if (asym->parsed())
      so = &so_asym;
    else
      so = &so_audit;
    const RunConfig cfg = resolve(*so);
    validate(cfg);
    set_precision_bits(cfg.precision_bits);
    OutSink sink(so->out_path);
    std::ostream& os = sink.stream();
    if (bands->parsed()) return run_bands(cfg, cache_path, os);
    if (dims->parsed()) return run_dims(cfg, os);
    if (gibbs->parsed()) return run_gibbs(cfg, beta_str, k_max, os);
    if (asym->parsed()) return run_asym(cfg, v_list, os);
    return run_audit(cfg, suite, checks, os);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return errc_is_config(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
