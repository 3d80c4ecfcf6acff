#include "cpack/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpack/cct.hpp"
#include "cpack/edo.hpp"
#include "cpack/graph.hpp"
#include "cpack/separator.hpp"
#include "cpack/treecover.hpp"
#include "cpack/wspd.hpp"

namespace cpack::cli {

namespace {

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

GeometricGraph load_graph_checked(const std::string& path, std::ostream& err,
                                  bool need_connected) {
  GeometricGraph g = read_graph_file(path);
  if (need_connected && !g.connected()) {
    auto comps = g.components();
    std::ostringstream os;
    os << "graph is disconnected (" << comps.size() << " components):";
    for (std::size_t i = 0; i < comps.size() && i < 8; ++i) {
      os << " {" << comps[i].front();
      if (comps[i].size() > 1) os << "..." << comps[i].back();
      os << "}";
    }
    err << os.str() << "\n";
    throw GraphParseError(ParseError{0, "disconnected input"});
  }
  return g;
}

void warn_if_c_low(const GeometricGraph& g, double c, std::ostream& err) {
  double chat = estimate_packedness(g, 20000);
  if (c < chat)
    err << "warning: declared c=" << fmt12(c)
        << " is below the estimated packedness lower bound " << fmt12(chat)
        << "\n";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

struct SelftestContext {
  std::ostream& out;
  std::ostream& err;
  int failures = 0;

  void check(bool ok, const std::string& what,
             const std::vector<std::string>& details = {}) {
    out << (ok ? "[ok] " : "[FAIL] ") << what << "\n";
    if (!ok) {
      ++failures;
      for (const auto& d : details) err << "  " << d << "\n";
    }
  }
};

void selftest_family(SelftestContext& ctx, const std::string& label,
                     const GeometricGraph& g, double c, int ado_max_n) {
  auto dm = all_pairs(g);
  for (int u = 0; u < g.n(); ++u)
    for (int v = 0; v < g.n(); ++v) {
      if (std::abs(dm(u, v) - dm(v, u)) > 1e-9 || (u == v && dm(u, u) != 0)) {
        ctx.check(false, label + ": distance matrix sanity");
        return;
      }
    }

  auto t = build_cct(g, c);
  auto cct_rep = verify_cct(g, dm, t, c);
  ctx.check(cct_rep.ok, label + ": connected-tree validity and dub bounds",
            cct_rep.violations);

  auto w = build_wspd(g, t, 4.0, WspdFlavor::kGraph, dist_fn(dm));
  auto wspd_rep = verify_wspd(w, g, t, dm, g.n());
  ctx.check(wspd_rep.ok, label + ": decomposition coverage and separation",
            wspd_rep.violations);

  auto sep = build_separator(g, c);
  auto sep_rep = verify_separator(g, sep);
  ctx.check(sep_rep.ok, label + ": separator partition and balance",
            sep_rep.violations);

  auto h = SeparatorHierarchy::build(g, c);
  bool exact = true;
  for (int u = 0; u < g.n() && exact; ++u)
    for (int v = 0; v < g.n() && exact; ++v)
      exact = std::abs(h.query(u, v) - dm(u, v)) <= 1e-9 * dm(u, v);
  ctx.check(exact, label + ": exact oracle matches the distance matrix");

  if (g.n() <= ado_max_n) {
    auto cover = build_tree_cover(g, c, 0.9, dist_fn(dm));
    bool good = true;
    for (int u = 0; u < g.n() && good; ++u)
      for (int v = u + 1; v < g.n() && good; ++v) {
        double ans = cover.query(u, v);
        good = ans >= dm(u, v) * (1 - 1e-9) &&
               ans <= 1.9 * dm(u, v) * (1 + 1e-9);
      }
    ctx.check(good, label + ": tree-cover distortion inside [1, 1+eps]");
  }
}

int cmd_selftest(int max_n, const std::string& inject, std::ostream& out,
                 std::ostream& err) {
  SelftestContext ctx{out, err};

  if (!inject.empty()) {
    auto fam = generate_family(FamilyKind::kPath, 24, 0);
    auto dm = all_pairs(fam.graph);
    auto t = build_cct(fam.graph, fam.c_bound);
    if (inject == "wspd-drop-pair") {
      auto w = build_wspd(fam.graph, t, 2.0, WspdFlavor::kGraph, dist_fn(dm));
      w.pairs.pop_back();
      auto rep = verify_wspd(w, fam.graph, t, dm);
      ctx.check(rep.ok, "injected decomposition with a dropped pair",
                rep.violations);
    } else if (inject == "dub-deflate") {
      t.nodes[t.root].dub = 1e-6;
      auto rep = verify_cct(fam.graph, dm, t, fam.c_bound);
      ctx.check(rep.ok, "injected tree with a deflated diameter bound",
                rep.violations);
    } else if (inject == "separator-ab-edge") {
      auto sep = build_separator(fam.graph, fam.c_bound);
      if (sep.C.empty()) throw std::logic_error("empty separator");
      sep.A.push_back(sep.C.back());
      sep.C.pop_back();
      auto rep = verify_separator(fam.graph, sep);
      ctx.check(rep.ok, "injected separator with a vertex moved into A",
                rep.violations);
    } else {
      err << "unknown injection '" << inject << "'\n";
      return kInputError;
    }
    return ctx.failures ? kVerificationFailure : kOk;
  }

  const int n = std::max(10, max_n);
  {
    auto fam = generate_family(FamilyKind::kPath, n, 0);
    selftest_family(ctx, "path", fam.graph, fam.c_bound, 60);
  }
  {
    int side = std::max(2, static_cast<int>(std::sqrt(n / 2.0)));
    auto fam = generate_family(FamilyKind::kGrid, side * side, 0);
    selftest_family(ctx, "grid", fam.graph, fam.c_bound, 40);
  }
  {
    auto fam = generate_family(FamilyKind::kStar, std::min(12, n - 1), 0);
    selftest_family(ctx, "star", fam.graph, fam.c_bound, 40);
  }
  {
    auto fam = generate_family(FamilyKind::kSpiral, std::max(8, n / 2), 0);
    selftest_family(ctx, "spiral", fam.graph, fam.c_bound, 48);
  }
  out << (ctx.failures ? "selftest: FAILURES\n" : "selftest: all checks passed\n");
  return ctx.failures ? kVerificationFailure : kOk;
}

int cmd_bench(const std::string& kind, const std::string& structure,
              std::vector<int> ns, double c_opt, double sigma, double epsilon,
              int queries, std::ostream& out) {
  using Clock = std::chrono::steady_clock;
  out << "n,c,sigma_or_eps,build_ms,size,query_ns\n";
  for (int n : ns) {
    auto fam = generate_family(parse_family_kind(kind), n, 0);
    double c = c_opt > 0 ? c_opt : fam.c_bound;
    double param = structure == "ado" ? epsilon : sigma;
    auto t0 = Clock::now();
    long size = 0;
    std::uint64_t rng = 0x9e3779b97f4a7c15ULL;
    auto next_vertex = [&rng, &fam]() {
      rng ^= rng << 13;
      rng ^= rng >> 7;
      rng ^= rng << 17;
      return static_cast<int>(rng % fam.graph.n());
    };
    double query_ns = 0.0;
    if (structure == "edo") {
      auto h = SeparatorHierarchy::build(fam.graph, c);
      auto built = Clock::now();
      auto qs = Clock::now();
      double sink = 0;
      for (int q = 0; q < queries; ++q) sink += h.query(next_vertex(), next_vertex());
      auto qe = Clock::now();
      (void)sink;
      size = h.stats().spt_entries;
      query_ns =
          std::chrono::duration<double, std::nano>(qe - qs).count() / queries;
      out << n << ',' << c << ',' << param << ','
          << std::chrono::duration<double, std::milli>(built - t0).count()
          << ',' << size << ',' << query_ns << "\n";
    } else if (structure == "wspd") {
      auto t = build_cct(fam.graph, c);
      auto h = SeparatorHierarchy::build(fam.graph, c);
      auto w = build_wspd(fam.graph, t, sigma, WspdFlavor::kGraph, dist_fn(h));
      auto built = Clock::now();
      size = static_cast<long>(w.pairs.size());
      out << n << ',' << c << ',' << param << ','
          << std::chrono::duration<double, std::milli>(built - t0).count()
          << ',' << size << ',' << 0 << "\n";
    } else if (structure == "ado") {
      auto h = SeparatorHierarchy::build(fam.graph, c);
      auto cover = build_tree_cover(fam.graph, c, epsilon, dist_fn(h));
      auto built = Clock::now();
      for (const auto& tr : cover.trees)
        size += static_cast<long>(tr.nodes.size());
      auto qs = Clock::now();
      double sink = 0;
      for (int q = 0; q < queries; ++q)
        sink += cover.query(next_vertex(), next_vertex());
      auto qe = Clock::now();
      (void)sink;
      query_ns =
          std::chrono::duration<double, std::nano>(qe - qs).count() / queries;
      out << n << ',' << c << ',' << param << ','
          << std::chrono::duration<double, std::milli>(built - t0).count()
          << ',' << size << ',' << query_ns << "\n";
    } else {
      throw std::invalid_argument("unknown structure '" + structure + "'");
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"well-separated pair decompositions, separators and distance "
               "oracles for c-packed geometric graphs"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a test-family graph file");
  std::string gen_kind = "path", gen_out;
  int gen_n = 16;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "path|grid|star|spiral");
  gen->add_option("--n", gen_n, "size parameter")->check(CLI::Range(2, 1 << 20));
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--output", gen_out, "output path")->required();

  // verify-packed
  auto* vp = app.add_subcommand("verify-packed",
                                "estimate a packedness lower bound");
  std::string vp_graph;
  double vp_c = 0.0;
  long vp_budget = 200000;
  vp->add_option("graph", vp_graph, "graph file")->required();
  vp->add_option("--c", vp_c, "declared packedness value")
      ->required()
      ->check(CLI::PositiveNumber);
  vp->add_option("--budget", vp_budget, "sample budget");

  // build-wspd
  auto* bw = app.add_subcommand("build-wspd",
                                "build a well-separated pair decomposition");
  std::string bw_graph, bw_flavor = "graph", bw_out;
  double bw_c = 0.0, bw_sigma = 2.0;
  bool bw_emit = false;
  bw->add_option("graph", bw_graph)->required();
  bw->add_option("--c", bw_c, "packedness value")
      ->required()
      ->check(CLI::PositiveNumber);
  bw->add_option("--sigma", bw_sigma, "separation factor");
  bw->add_option("--flavor", bw_flavor, "graph|euclidean");
  bw->add_flag("--emit-pairs", bw_emit, "print one line per pair");
  bw->add_option("-o,--output", bw_out, "pair dump path");

  // separator
  auto* sp = app.add_subcommand("separator", "balanced vertex separator");
  std::string sp_graph;
  double sp_c = 0.0, sp_beta = kDefaultSeparatorBeta;
  sp->add_option("graph", sp_graph)->required();
  sp->add_option("--c", sp_c, "packedness value")
      ->required()
      ->check(CLI::PositiveNumber);
  sp->add_option("--beta", sp_beta, "inner-ball mass fraction");

  // build-edo / query-edo
  auto* be = app.add_subcommand("build-edo", "build the exact distance oracle");
  std::string be_graph, be_out;
  double be_c = 0.0;
  int be_n0 = 8;
  be->add_option("graph", be_graph)->required();
  be->add_option("--c", be_c, "packedness value")
      ->required()
      ->check(CLI::PositiveNumber);
  be->add_option("--n0", be_n0, "leaf size threshold");
  be->add_option("-o,--output", be_out)->required();

  auto* qe = app.add_subcommand("query-edo", "query a stored exact oracle");
  std::string qe_file;
  int qe_u = 0, qe_v = 0;
  qe->add_option("oracle", qe_file)->required();
  qe->add_option("u", qe_u)->required();
  qe->add_option("v", qe_v)->required();

  // build-ado / query-ado
  auto* ba = app.add_subcommand("build-ado",
                                "build the approximate distance oracle");
  std::string ba_graph, ba_out;
  double ba_c = 0.0, ba_eps = 0.5;
  ba->add_option("graph", ba_graph)->required();
  ba->add_option("--c", ba_c, "packedness value")
      ->required()
      ->check(CLI::PositiveNumber);
  ba->add_option("--epsilon", ba_eps, "distortion parameter in (0,1)");
  ba->add_option("-o,--output", ba_out)->required();

  auto* qa = app.add_subcommand("query-ado", "query a stored tree cover");
  std::string qa_file;
  int qa_u = 0, qa_v = 0;
  qa->add_option("oracle", qa_file)->required();
  qa->add_option("u", qa_u)->required();
  qa->add_option("v", qa_v)->required();

  // selftest
  auto* st = app.add_subcommand("selftest", "run the invariant suites");
  int st_max_n = 0;
  std::string st_inject;
  st->add_option("--max-n", st_max_n, "cap for exhaustive verification");
  st->add_option("--inject", st_inject,
                 "corrupt a structure and expect detection: wspd-drop-pair|"
                 "dub-deflate|separator-ab-edge");

  // bench
  auto* bn = app.add_subcommand("bench", "builds and query timings as CSV");
  std::string bn_kind = "path", bn_structure = "edo";
  std::string bn_ns;
  double bn_c = 0.0, bn_sigma = 4.0, bn_eps = 0.5;
  int bn_queries = 1000;
  bn->add_option("--kind", bn_kind, "family kind");
  bn->add_option("--structure", bn_structure, "edo|wspd|ado");
  bn->add_option("--ns", bn_ns,
                 "comma-separated sizes (default 64,128,256,512; the ado "
                 "build is quadratic at small n, so it defaults to 16,32,64)");
  bn->add_option("--c", bn_c, "packedness value (default: family bound)");
  bn->add_option("--sigma", bn_sigma, "separation factor for wspd");
  bn->add_option("--epsilon", bn_eps, "distortion for ado");
  bn->add_option("--queries", bn_queries, "queries per timing sample");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*gen) {
      auto fam = generate_family(parse_family_kind(gen_kind), gen_n, gen_seed);
      std::ostringstream os;
      write_graph(os, fam.graph);
      spill(gen_out, os.str());
      out << "n " << fam.graph.n() << " m " << fam.graph.m() << " c_bound "
          << fmt12(fam.c_bound) << "\n";
      return kOk;
    }

    if (*vp) {
      auto g = read_graph_file(vp_graph);
      double chat = estimate_packedness(g, vp_budget);
      bool pass = chat <= vp_c + 1e-9;
      out << "c_hat " << fmt12(chat) << "\n"
          << (pass ? "PASS" : "FAIL") << " declared c " << fmt12(vp_c) << "\n";
      return pass ? kOk : kVerificationFailure;
    }

    if (*bw) {
      auto g = load_graph_checked(bw_graph, err, true);
      warn_if_c_low(g, bw_c, err);
      auto t = build_cct(g, bw_c);
      Wspd w;
      if (bw_flavor == "euclidean") {
        w = build_wspd(g, t, bw_sigma, WspdFlavor::kEuclidean);
      } else if (bw_flavor == "graph") {
        auto h = SeparatorHierarchy::build(g, bw_c);
        w = build_wspd(g, t, bw_sigma, WspdFlavor::kGraph, dist_fn(h));
      } else {
        err << "unknown flavor '" << bw_flavor << "'\n";
        return kInputError;
      }
      out << "pairs " << w.pairs.size() << "\n";
      if (bw_emit || !bw_out.empty()) {
        std::ostringstream os;
        for (const auto& p : w.pairs)
          os << "P " << p.rep_a << ' ' << p.rep_b << ' ' << fmt12(p.dub_a)
             << ' ' << fmt12(p.dub_b) << ' ' << fmt12(p.dist_lower) << "\n";
        if (!bw_out.empty())
          spill(bw_out, os.str());
        else
          out << os.str();
      }
      return kOk;
    }

    if (*sp) {
      auto g = load_graph_checked(sp_graph, err, true);
      warn_if_c_low(g, sp_c, err);
      auto res = build_separator(g, sp_c, sp_beta);
      out << "C:";
      for (int v : res.C) out << ' ' << v;
      out << "\n" << res.A.size() << ' ' << res.B.size() << "\n";
      out << "flow " << res.flow << "\n";
      out << "beta_achieved " << fmt12(res.beta_achieved) << "\n";
      if (res.c_exceeded)
        err << "warning: flow " << res.flow
            << " exceeds 2c; declared c may underestimate the input\n";
      auto rep = verify_separator(g, res);
      if (!rep.ok) {
        for (const auto& v : rep.violations) err << v << "\n";
        return kVerificationFailure;
      }
      return kOk;
    }

    if (*be) {
      auto g = load_graph_checked(be_graph, err, true);
      warn_if_c_low(g, be_c, err);
      auto h = SeparatorHierarchy::build(g, be_c, be_n0);
      spill(be_out, h.dump());
      auto stc = h.stats();
      out << "nodes " << stc.node_count << " height " << stc.height
          << " spt_entries " << stc.spt_entries << "\n";
      return kOk;
    }

    if (*qe) {
      auto h = SeparatorHierarchy::load(slurp(qe_file));
      out << fmt12(h.query(qe_u, qe_v)) << "\n";
      return kOk;
    }

    if (*ba) {
      auto g = load_graph_checked(ba_graph, err, true);
      warn_if_c_low(g, ba_c, err);
      auto h = SeparatorHierarchy::build(g, ba_c);
      auto cover = build_tree_cover(g, ba_c, ba_eps, dist_fn(h));
      spill(ba_out, dump_ado(cover, h));
      out << "trees " << cover.trees.size() << "\n";
      return kOk;
    }

    if (*qa) {
      auto loaded = load_ado(slurp(qa_file));
      out << fmt12(loaded.cover.query(qa_u, qa_v)) << "\n";
      return kOk;
    }

    if (*st) {
      int max_n = st_max_n;
      if (max_n <= 0) {
        max_n = 120;
        if (const char* env = std::getenv("CPACK_MAX_EXHAUSTIVE_N"))
          max_n = std::atoi(env);
      }
      return cmd_selftest(max_n, st_inject, out, err);
    }

    if (*bn) {
      if (bn_ns.empty())
        bn_ns = bn_structure == "ado" ? "16,32,64" : "64,128,256,512";
      std::vector<int> ns;
      std::stringstream ss(bn_ns);
      for (std::string tok; std::getline(ss, tok, ',');)
        ns.push_back(std::stoi(tok));
      return cmd_bench(bn_kind, bn_structure, ns, bn_c, bn_sigma, bn_eps,
                       bn_queries, out);
    }
  } catch (const GraphParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailure;
  }
  return kInputError;
}

}  // namespace cpack::cli
