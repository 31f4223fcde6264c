#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sl2ws/acceptance.hpp"
#include "sl2ws/json_io.hpp"

using namespace sl2ws;

namespace {

// Exit 1: a computed value disagrees with a claim being reproduced.
struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Exit 2: the command line asks for something out of range.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string out = "text";
  unsigned threads = 0;
  bool long_run = false;
};

std::string join(const std::vector<int>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

Json partition_json(const RiordanPartition& p) {
  Json j = Json::array();
  for (const auto& part : p.parts) j.push_back(part);
  return j;
}

JacobiDiagram read_diagram(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  std::stringstream s;
  s << f.rdbuf();
  return parse(s.str());
}

void need_long(bool long_run, const std::string& what) {
  if (!long_run) throw UsageError(what + " needs --long");
}

int table1(const Globals& g, int max_n, bool include9) {
  if (include9) max_n = std::max(max_n, 9);
  if (max_n < 2 || max_n > 9) throw UsageError("--max-n must be in 2..9");
  if (max_n == 9) need_long(g.long_run, "n = 9");
  std::vector<Table1Row> rows;
  std::vector<std::string> bad;
  for (int n = 2; n <= max_n; ++n) {
    rows.push_back(table1_row(n));
    const auto& e = kExpectedDimensions[n - 2];
    const auto& r = rows.back();
    if (r.dim_c != e.c || r.dim_inv != e.inv || r.dim_ker != e.ker) bad.push_back("n=" + std::to_string(n));
  }
  if (g.out == "json") {
    Json j = Json::array();
    for (const auto& r : rows)
      j.push_back({{"n", r.n}, {"dim_C", r.dim_c.get_str()}, {"dim_Inv", r.dim_inv.get_str()}, {"dim_Ker", r.dim_ker.get_str()}});
    std::cout << j.dump(2) << "\n";
  } else {
    const char* sep = g.out == "csv" ? "," : "\t";
    std::cout << "n" << sep << "dim_C" << sep << "dim_Inv" << sep << "dim_Ker\n";
    for (const auto& r : rows) std::cout << r.n << sep << r.dim_c << sep << r.dim_inv << sep << r.dim_ker << "\n";
  }
  if (!bad.empty()) throw AssertionFailure("dimension table (dim C_n, dim Inv, dim Ker) mismatch at " + bad.front());
  return 0;
}

int analysis_kernel(const Globals& g, int n) {
  if (n < 2 || n > 8) throw UsageError("--n must be in 2..8");
  const auto basis = homotopy_kernel_basis(n);
  if (g.out == "json") {
    Json j = Json::array();
    for (const auto& v : basis) {
      Json row = Json::array();
      for (const auto& x : v) row.push_back(to_string(x));
      j.push_back(row);
    }
    std::cout << Json{{"n", n}, {"dimension", basis.size()}, {"basis", j}}.dump(2) << "\n";
  } else {
    if (g.out == "text") std::cout << "kernel of W at n = " << n << ": dimension " << basis.size() << "\n";
    for (const auto& v : basis) {
      for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? "," : "") << to_string(v[i]);
      std::cout << "\n";
    }
  }
  if (Integer(static_cast<unsigned long>(basis.size())) != kExpectedDimensions[n - 2].ker)
    throw AssertionFailure("dim Ker W_n disagrees with the dimension table at n=" + std::to_string(n));
  return 0;
}

int analysis_relators(const Globals& g, int k, bool check_span, bool full) {
  if (k < 3 || k > 8) throw UsageError("--degree must be in 3..8");
  if (k == 8) need_long(g.long_run, "degree 8");
  const RelatorSet r = one_loop_relators(k, {.stop_at_kernel_dim = !full});
  const auto& s = r.stats;
  if (g.out == "json") {
    std::cout << Json{{"degree", k},
                      {"rank", r.rank()},
                      {"kernel_dim", s.kernel_dim},
                      {"in_kernel", s.in_kernel},
                      {"diagrams", s.diagrams},
                      {"differences", s.differences},
                      {"exhausted", s.exhausted}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "degree " << k << ": " << r.rank() << " independent relators in C_" << k + 1 << ", dim Ker " << s.kernel_dim
              << ", " << s.diagrams << " one-loop diagrams used\n";
  }
  if (!s.in_kernel) throw AssertionFailure("1-loop relators must lie in Ker W");
  if (check_span && r.rank() != s.kernel_dim) throw AssertionFailure("1-loop relators do not span Ker W in degree " + std::to_string(k));
  return 0;
}

int weights_eval(const Globals& g, const std::string& file, int n, const std::string& method) {
  const JacobiDiagram d = read_diagram(file);
  const WeightValue w = method == "cv" ? weight_cv(d, n) : weight_direct(d, n);
  if (g.out == "json")
    std::cout << to_json(w.tensor).dump(2) << "\n";
  else
    std::cout << tensor_to_string(w.tensor) << "\n";
  return 0;
}

int rewrite_normalize(const Globals& g, const std::string& file, int n) {
  const RationalVector c = ihx_normalize(read_diagram(file), n);
  if (g.out == "json") {
    Json j = Json::array();
    for (const auto& x : c) j.push_back(to_string(x));
    std::cout << j.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < c.size(); ++i) std::cout << (i ? "," : "") << to_string(c[i]);
    std::cout << "\n";
  }
  return 0;
}

int riordan_list(const Globals& g, int n) {
  if (n < 2 || n > 14) throw UsageError("--n must be in 2..14");
  const auto ps = riordan_partitions(n);
  if (g.out == "json") {
    Json j = Json::array();
    for (const auto& p : ps) j.push_back(partition_json(p));
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& p : ps) std::cout << to_string(p) << "\n";
  }
  if (Integer(static_cast<unsigned long>(ps.size())) != riordan_number(n)) throw AssertionFailure("Riordan count");
  return 0;
}

int riordan_basis(const Globals& g, int n) {
  if (n < 2 || n > 9) throw UsageError("--n must be in 2..9");
  const TreeBasis& tb = tree_basis(n);
  if (g.out == "json") {
    Json j = Json::array();
    for (std::size_t i = 0; i < tb.size(); ++i)
      j.push_back({{"partition", partition_json(tb.trees()[i].partition)}, {"tensor", to_json(tb.sl2_tensors()[i])}});
    std::cout << j.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < tb.size(); ++i)
      std::cout << to_string(tb.trees()[i].partition) << ": " << tb.sl2_tensors()[i].entries().size() << " nonzero entries\n";
  }
  return 0;
}

int fk_basis(const Globals& g, int n, const std::string& which) {
  if (n < 2 || n > 8) throw UsageError("--n must be in 2..8");
  Json j = Json::array();
  for (const auto& p : riordan_partitions(n)) {
    const QTensor t = which == "jw" ? f_jw(p) : f0(p);
    if (g.out == "json")
      j.push_back({{"partition", partition_json(p)}, {"tensor", to_json(t)}});
    else
      std::cout << to_string(p) << ": " << tensor_to_string(t) << "\n";
  }
  if (g.out == "json") std::cout << j.dump() << "\n";
  return 0;
}

int fk_check_rho(const Globals& g, int max_n) {
  if (max_n < 2 || max_n > 7) throw UsageError("--max-n must be in 2..7");
  std::vector<int> counts;
  for (int n = 2; n <= max_n; ++n) {
    int c = 0;
    for (const auto& p : riordan_partitions(n)) {
      if (!check_prop_rho(p)) throw AssertionFailure("rho(f(T)) = (-1)^deg(T) 2^-tri(T) W(T) fails for " + to_string(p));
      ++c;
    }
    counts.push_back(c);
  }
  if (g.out == "json")
    std::cout << Json{{"ok", true}, {"trees", counts}}.dump() << "\n";
  else
    std::cout << "OK " << join(counts, "+") << " trees\n";
  return 0;
}

int fk_transition(const Globals& g, int n) {
  if (n < 2 || n > 7) throw UsageError("--n must be in 2..7");
  TransitionMatrix tm;
  try {
    tm = transition_matrix(n);
  } catch (const Error& e) {
    if (e.code() == Errc::NotUnitriangular) throw AssertionFailure(std::string("modified basis must be unitriangular over the dual canonical basis: ") + e.what());
    throw;
  }
  if (g.out == "json") {
    Json rows = Json::array();
    for (const auto& r : tm.a) {
      Json row = Json::array();
      for (const auto& x : r) row.push_back(to_json(x));
      rows.push_back(row);
    }
    Json order = Json::array();
    for (const auto& p : tm.order) order.push_back(partition_json(p));
    std::cout << Json{{"n", n}, {"order", order}, {"matrix", rows}}.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < tm.order.size(); ++i) {
      std::cout << to_string(tm.order[i]) << ":";
      for (const auto& x : tm.a[i]) std::cout << (g.out == "csv" ? "," : " ") << x.str();
      std::cout << "\n";
    }
  }
  return 0;
}

int characters_table(const Globals& g, int n, const std::string& which, bool decomp) {
  if (n < 2 || n > 8) throw UsageError("--n must be in 2..8");
  CharacterVector chi;
  if (which == "C")
    chi = character_of(n, [n](const CycleType& ct) { return chi_C(n, ct); });
  else if (which == "inv")
    chi = character_of(n, [n](const CycleType& ct) { return chi_inv(n, ct); });
  else if (which == "ker")
    chi = chi_kernel(n);
  else
    chi = chi_image(n);
  std::map<YoungShape, Integer> dec;
  if (decomp) {
    try {
      dec = decompose(chi, n);
    } catch (const Error& e) {
      throw AssertionFailure(std::string("kernel character must be a genuine character: ") + e.what());
    }
  }
  if (g.out == "json") {
    Json vals = Json::array(), parts = Json::array();
    for (const auto& [ct, v] : chi) vals.push_back({{"cycle_type", ct}, {"value", to_string(v)}});
    for (const auto& [lam, m] : dec) parts.push_back({{"partition", lam}, {"multiplicity", m.get_str()}});
    Json j{{"n", n}, {"which", which}, {"values", vals}};
    if (decomp) j["decomposition"] = parts;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "cycle_type,value\n";
    for (const auto& [ct, v] : chi) std::cout << join(ct, " ") << "," << to_string(v) << "\n";
    if (decomp) {
      std::cout << "\npartition,multiplicity\n";
      for (const auto& [lam, m] : dec) std::cout << join(lam, " ") << "," << m << "\n";
    }
  }
  return 0;
}

int reproduce(const Globals& g, const std::string& suite, std::uint64_t seed) {
  if (suite != "core") throw UsageError("unknown suite " + suite);
  AcceptanceOptions o{g.long_run, seed};
  Json j = Json::array();
  const auto results = run_acceptance(o, [&](const CriterionResult& r) {
    if (g.out == "json")
      j.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    else
      std::cout << format_result(r) << std::endl;
  });
  if (g.out == "json") std::cout << j.dump(2) << "\n";
  for (const auto& r : results)
    if (!r.pass) throw AssertionFailure("acceptance criterion " + std::to_string(r.id) + " (" + r.name + ") failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sl2 weight system computations", "paperlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--threads", g.threads, "worker threads, 0 = all cores");
  app.add_flag("--long", g.long_run, "allow the n = 9 / degree 8 jobs");

  std::function<int()> action;

  int max_n = 8, n = 0, degree = 0;
  bool include9 = false, check_span = false, full = false, decomp = false;
  std::string file, method = "direct", which, suite = "core";
  std::uint64_t seed = AcceptanceOptions{}.seed;

  auto* t1 = app.add_subcommand("table1", "dimension table");
  t1->add_option("--max-n", max_n);
  t1->add_flag("--include-9", include9);
  t1->callback([&] { action = [&] { return table1(g, max_n, include9); }; });

  auto* an = app.add_subcommand("analysis", "homotopy part of W")->require_subcommand(1);
  auto* an_t1 = an->add_subcommand("table1", "dimension table");
  an_t1->add_option("--max-n", max_n);
  an_t1->add_flag("--include-9", include9);
  an_t1->callback([&] { action = [&] { return table1(g, max_n, include9); }; });
  auto* an_k = an->add_subcommand("kernel", "exact kernel basis in linear-tree coordinates");
  an_k->add_option("--n", n)->required();
  an_k->callback([&] { action = [&] { return analysis_kernel(g, n); }; });
  auto* an_r = an->add_subcommand("relators", "1-loop relators");
  an_r->add_option("--degree", degree)->required();
  an_r->add_flag("--check-span", check_span);
  an_r->add_flag("--full", full, "enumerate every one-loop diagram");
  an_r->callback([&] { action = [&] { return analysis_relators(g, degree, check_span, full); }; });

  auto* we = app.add_subcommand("weights", "weight system")->require_subcommand(1);
  auto* we_e = we->add_subcommand("eval", "evaluate W on a diagram file");
  we_e->add_option("--diagram", file)->required();
  we_e->add_option("--n", n)->required();
  we_e->add_option("--method", method)->check(CLI::IsMember({"direct", "cv"}));
  we_e->callback([&] { action = [&] { return weights_eval(g, file, n, method); }; });

  auto* rw = app.add_subcommand("rewrite", "tree normal forms")->require_subcommand(1);
  auto* rw_n = rw->add_subcommand("normalize", "linear-tree coordinates of a tree");
  rw_n->add_option("--diagram", file)->required();
  rw_n->add_option("--n", n)->required();
  rw_n->callback([&] { action = [&] { return rewrite_normalize(g, file, n); }; });

  auto* ri = app.add_subcommand("riordan", "Riordan partitions and the tree basis")->require_subcommand(1);
  auto* ri_l = ri->add_subcommand("list", "list Riordan partitions");
  ri_l->add_option("--n", n)->required();
  ri_l->callback([&] { action = [&] { return riordan_list(g, n); }; });
  auto* ri_b = ri->add_subcommand("basis", "tree basis tensors");
  ri_b->add_option("--n", n)->required();
  ri_b->callback([&] { action = [&] { return riordan_basis(g, n); }; });

  auto* fk = app.add_subcommand("fk", "q-deformed graphical calculus")->require_subcommand(1);
  auto* fk_b = fk->add_subcommand("basis", "dual canonical or modified basis");
  fk_b->add_option("--n", n)->required();
  fk_b->add_option("--which", which)->required()->check(CLI::IsMember({"dual", "jw"}));
  fk_b->callback([&] { action = [&] { return fk_basis(g, n, which); }; });
  auto* fk_r = fk->add_subcommand("check-rho", "specialisation at q = 1 against W");
  int rho_max_n = 7;
  fk_r->add_option("--max-n", rho_max_n);
  fk_r->callback([&] { action = [&] { return fk_check_rho(g, rho_max_n); }; });
  auto* fk_t = fk->add_subcommand("transition", "modified basis in dual canonical coordinates");
  fk_t->add_option("--n", n)->required();
  fk_t->callback([&] { action = [&] { return fk_transition(g, n); }; });

  auto* ch = app.add_subcommand("characters", "symmetric group characters")->require_subcommand(1);
  auto* ch_t = ch->add_subcommand("table", "character values by cycle type");
  ch_t->add_option("--n", n)->required();
  ch_t->add_option("--which", which)->required()->check(CLI::IsMember({"C", "inv", "ker", "im"}));
  ch_t->add_flag("--decompose", decomp);
  ch_t->callback([&] { action = [&] { return characters_table(g, n, which, decomp); }; });

  auto* rp = app.add_subcommand("reproduce", "run the acceptance criteria");
  rp->add_option("--suite", suite);
  rp->add_option("--seed", seed, "seed for the randomized checks");
  rp->callback([&] { action = [&] { return reproduce(g, suite, seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  set_thread_count(g.threads);
  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const AssertionFailure& e) {
    std::cerr << "AssertionFailure: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    // bad input data (a malformed diagram, labels out of range) is a usage problem
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
