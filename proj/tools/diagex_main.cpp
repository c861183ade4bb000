// One binary over the whole library: enumeration, expectation evaluation,
// oracles, invariant-triple reports, twirls, and the acceptance suite.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <diagex/io.hpp>
#include <diagex/selftest.hpp>

namespace {

using namespace diagex;

struct GlobalOpts {
  double tol = kDefaultTol;
  uint64_t seed = 0;
  long long budget = static_cast<long long>(kExpansionBudget);

  size_t budget_or_throw() const {
    if (budget < 0) throw std::invalid_argument("budget must be non-negative");
    return static_cast<size_t>(budget);
  }
};

struct FamilySummary {
  std::string name;
  bool is_s = false;
  int n_u = 0, n_ubar = 0, n_s = 0;
};

std::vector<FamilySummary> family_summary(const Network& net) {
  std::vector<FamilySummary> out;
  for (const auto& nd : net.nodes) {
    if (!nd.tag) continue;
    FamilySummary* f = nullptr;
    for (auto& e : out)
      if (e.name == nd.tag->family) f = &e;
    if (!f) {
      out.push_back({nd.tag->family, false, 0, 0, 0});
      f = &out.back();
    }
    switch (nd.tag->flavor) {
      case Flavor::u:
        ++f->n_u;
        break;
      case Flavor::u_conjugate:
        ++f->n_ubar;
        break;
      default:
        ++f->n_s;
        f->is_s = true;
        break;
    }
  }
  return out;
}

FamilySummary single_family(const Network& net, const char* why) {
  const auto fams = family_summary(net);
  if (fams.size() != 1)
    throw std::invalid_argument(std::string(why) + " needs exactly one random family");
  return fams.front();
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    save_json(path, j);
    std::cout << "wrote " << path << "\n";
  }
}

const char* verdict(bool b) { return b ? "pass" : "fail"; }

int run_enumerate(const std::string& kind, int n) {
  if (kind == "partitions") {
    const auto all = enumerate_set_partitions(n);
    for (const auto& p : all) std::cout << print_partition(p) << "\n";
    std::cout << "total " << all.size() << "\n";
  } else if (kind == "even") {
    const auto all = enumerate_even_partitions(n);
    for (const auto& p : all) std::cout << print_partition(p) << "\n";
    std::cout << "total " << all.size() << "\n";
  } else if (kind == "ubps") {
    const auto all = enumerate_ubps(n);
    for (const auto& x : all) std::cout << print_ubp(x) << "\n";
    std::cout << "total " << all.size() << "\n";
  } else {
    throw std::invalid_argument("kind must be partitions, even, or ubps");
  }
  return 0;
}

int run_expect(const GlobalOpts& g, const std::string& file, const std::string& mode,
               const std::string& oracle, long long mc_samples) {
  const Network net = network_from_json(load_json(file));

  if (mode == "symbolic") {
    const auto fam = single_family(net, "symbolic mode");
    const auto ex = fam.is_s ? expand_s(net, fam.name) : expand_u(net, fam.name);
    for (const auto& [text, w] : symbolic_terms(ex)) std::cout << text << "  " << w << "\n";
    std::cout << "terms " << ex.terms.size() << "\n";
    return 0;
  }

  const Tensor val = expect(net, g.budget_or_throw());
  std::cout << tensor_to_json(val).dump(2) << "\n";

  if (!oracle.empty()) {
    const auto fam = single_family(net, "oracle comparison");
    Tensor ref;
    if (oracle == "design") {
      if (fam.is_s) throw std::invalid_argument("design oracle applies to phase families");
      ref = exact_u(net, fam.name, std::max(fam.n_u, fam.n_ubar));
    } else {
      if (!fam.is_s) throw std::invalid_argument("sign oracle applies to sign families");
      ref = exact_s(net, fam.name);
    }
    std::cout << "oracle\n" << tensor_to_json(ref).dump(2) << "\n";
    const double dev = max_abs_diff(val, ref);
    std::cout << "max deviation " << dev << (dev < g.tol ? " (within tol " : " (exceeds tol ")
              << g.tol << ")\n";
  }

  if (mc_samples > 0) {
    const auto [mean, err] = monte_carlo(net, SampleConfig{g.seed, static_cast<size_t>(mc_samples)});
    std::cout << "mc mean\n" << tensor_to_json(mean).dump(2) << "\n";
    std::cout << "mc stderr\n" << tensor_to_json(err).dump(2) << "\n";
    std::cout << "mc max deviation " << max_abs_diff(mean, val) << "\n";
  }
  return 0;
}

int run_mc(const GlobalOpts& g, const std::string& file, long long samples) {
  const Network net = network_from_json(load_json(file));
  if (samples < 2) throw std::invalid_argument("monte carlo needs at least two samples");
  const auto [mean, err] = monte_carlo(net, SampleConfig{g.seed, static_cast<size_t>(samples)});
  std::cout << "samples " << samples << " seed " << g.seed << "\n";
  std::cout << "mean\n" << tensor_to_json(mean).dump(2) << "\n";
  std::cout << "stderr\n" << tensor_to_json(err).dump(2) << "\n";
  return 0;
}

Tensor load_bipartite(const std::string& file) {
  return bipartite_from_matrix(from_eigen(matrix_from_json(load_json(file))));
}

int run_ldoi_triple(const std::string& file) {
  std::cout << triple_to_json(triple_of(load_bipartite(file))).dump(2) << "\n";
  return 0;
}

int run_ldoi_project(const std::string& file, const std::string& kind, const std::string& out) {
  const Tensor x = load_bipartite(file);
  Tensor y;
  if (kind == "ldoi")
    y = project_ldoi(x);
  else if (kind == "ldui")
    y = project_ldui(x);
  else
    y = project_cldui(x);
  emit(matrix_to_json(to_eigen(matrix_from_bipartite(y))), out);
  return 0;
}

int run_ldoi_psd(const GlobalOpts& g, const std::string& file, bool swapped) {
  const auto t = triple_from_json(load_json(file));
  std::cout << "selfadjoint " << (is_selfadjoint_triple(t, g.tol) ? "yes" : "no") << "\n";
  const bool ok = swapped ? is_ppt_triple(t, g.tol) : is_psd_triple(t, g.tol);
  std::cout << (swapped ? "ppt " : "psd ") << (ok ? "yes" : "no") << "\n";
  return 0;
}

int run_ldoi_trace(const std::string& file) {
  const auto t = triple_from_json(load_json(file));
  std::cout << "trace " << to_json(trace_triple(t)).dump() << "\n";
  return 0;
}

int run_ldoi_realign(const GlobalOpts& g, const std::string& file) {
  const auto t = triple_from_json(load_json(file));
  const auto [straight, swapped] = realign_blocks(t);
  const auto part = [](const char* name, const Matrix& m) {
    std::cout << "part " << name << ": entrywise " << entrywise_norm(m) << "  trace norm "
              << trace_norm(m) << "  gap " << entrywise_norm(m) - trace_norm(m) << "\n";
  };
  part("a", t.a);
  part("b", t.b);
  part("c", t.c);
  std::cout << "realigned trace norm " << trace_norm(straight) << " (straight) "
            << trace_norm(swapped) << " (swapped)\n";
  std::cout << "criterion " << verdict(realignment_criterion(t, g.tol)) << "\n";
  return 0;
}

int run_ldoi_tcp_check(const GlobalOpts& g, const std::string& file) {
  const auto t = triple_from_json(load_json(file));
  const auto r = tcp_necessary(t, g.tol);
  std::cout << "shared diagonal: " << verdict(r.shared_diagonal) << "\n";
  std::cout << "positivity: " << verdict(r.positivity) << "\n";
  std::cout << "pairwise bound: " << verdict(r.pairwise_bound) << "\n";
  std::cout << "realignment: " << verdict(r.realignment) << "\n";
  std::cout << "overall " << verdict(r.pass()) << "\n";
  return 0;
}

int run_ldoi_from_factors(const std::string& file, const std::string& out) {
  const auto t = triple_from_factors(factors_from_json(load_json(file)));
  emit(triple_to_json(t), out);
  return 0;
}

int run_twirl(const std::string& kind, const std::string& file, const std::string& out) {
  const ChoiMatrix m{load_bipartite(file)};
  ChoiMatrix r;
  if (kind == "equal")
    r = twirl_equal(m);
  else if (kind == "parallel")
    r = twirl_parallel(m);
  else
    r = twirl_cross(m);
  emit(matrix_to_json(to_eigen(matrix_from_bipartite(r.j))), out);
  return 0;
}

int run_twirl_apply(const std::string& choi_file, const std::string& x_file) {
  const ChoiMatrix m{load_bipartite(choi_file)};
  const Matrix x = matrix_from_json(load_json(x_file));
  std::cout << matrix_to_json(apply_map(m, x)).dump(2) << "\n";
  return 0;
}

int run_selftest(const std::vector<int>& only) {
  const auto results = acceptance::run_checks(&std::cout, only);
  size_t passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  std::cout << "acceptance: " << passed << "/" << results.size() << " passed\n";
  return acceptance::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expectation values of networks over random diagonal phases and signs"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--tol", g.tol, "comparison tolerance");
  app.add_option("--seed", g.seed, "sampling seed");
  app.add_option("--budget", g.budget, "expansion term budget");

  int code = 0;

  auto* enumerate = app.add_subcommand("enumerate", "list partitions, even partitions, or ubps");
  enumerate->fallthrough();
  std::string enum_kind;
  int enum_n = 0;
  enumerate->add_option("kind", enum_kind, "partitions | even | ubps")->required();
  enumerate->add_option("n", enum_n, "ground-set size")->required();
  enumerate->callback([&] { code = run_enumerate(enum_kind, enum_n); });

  auto* expect_cmd = app.add_subcommand("expect", "evaluate a network expectation from a file");
  expect_cmd->fallthrough();
  std::string expect_file, expect_mode = "numeric", expect_oracle;
  long long expect_mc = 0;
  expect_cmd->add_option("file", expect_file, "network file")->required();
  expect_cmd->add_option("--mode", expect_mode, "numeric | symbolic")
      ->check(CLI::IsMember({"numeric", "symbolic"}));
  expect_cmd->add_option("--oracle", expect_oracle, "compare against design | signs oracle")
      ->check(CLI::IsMember({"design", "signs"}));
  expect_cmd->add_option("--mc", expect_mc, "also sample this many times");
  expect_cmd->callback(
      [&] { code = run_expect(g, expect_file, expect_mode, expect_oracle, expect_mc); });

  auto* mc_cmd = app.add_subcommand("mc", "sample a network expectation");
  mc_cmd->fallthrough();
  std::string mc_file;
  long long mc_samples = 10000;
  mc_cmd->add_option("file", mc_file, "network file")->required();
  mc_cmd->add_option("--samples", mc_samples, "sample count");
  mc_cmd->callback([&] { code = run_mc(g, mc_file, mc_samples); });

  auto* ldoi = app.add_subcommand("ldoi", "invariant-matrix triple analyses");
  ldoi->require_subcommand(1);
  ldoi->fallthrough();

  auto* lt = ldoi->add_subcommand("triple", "extract (a, b, c) from a d^2 x d^2 matrix");
  lt->fallthrough();
  std::string lt_file;
  lt->add_option("file", lt_file, "matrix file")->required();
  lt->callback([&] { code = run_ldoi_triple(lt_file); });

  auto* lp = ldoi->add_subcommand("project", "project a d^2 x d^2 matrix onto an invariant family");
  lp->fallthrough();
  std::string lp_file, lp_kind = "ldoi", lp_out;
  lp->add_option("file", lp_file, "matrix file")->required();
  lp->add_option("--kind", lp_kind, "ldoi | ldui | cldui")
      ->check(CLI::IsMember({"ldoi", "ldui", "cldui"}));
  lp->add_option("-o,--out", lp_out, "write the projected matrix here");
  lp->callback([&] { code = run_ldoi_project(lp_file, lp_kind, lp_out); });

  auto* lpsd = ldoi->add_subcommand("psd", "positivity of a triple");
  lpsd->fallthrough();
  std::string lpsd_file;
  lpsd->add_option("file", lpsd_file, "triple file")->required();
  lpsd->callback([&] { code = run_ldoi_psd(g, lpsd_file, false); });

  auto* lppt = ldoi->add_subcommand("ppt", "positivity of the partial transpose");
  lppt->fallthrough();
  std::string lppt_file;
  lppt->add_option("file", lppt_file, "triple file")->required();
  lppt->callback([&] { code = run_ldoi_psd(g, lppt_file, true); });

  auto* ltr = ldoi->add_subcommand("trace", "trace of the invariant matrix of a triple");
  ltr->fallthrough();
  std::string ltr_file;
  ltr->add_option("file", ltr_file, "triple file")->required();
  ltr->callback([&] { code = run_ldoi_trace(ltr_file); });

  auto* lre = ldoi->add_subcommand("realign", "realignment norms and criterion");
  lre->fallthrough();
  std::string lre_file;
  lre->add_option("file", lre_file, "triple file")->required();
  lre->callback([&] { code = run_ldoi_realign(g, lre_file); });

  auto* ltc = ldoi->add_subcommand("tcp-check", "necessary factor-triple conditions");
  ltc->fallthrough();
  std::string ltc_file;
  ltc->add_option("file", ltc_file, "triple file")->required();
  ltc->callback([&] { code = run_ldoi_tcp_check(g, ltc_file); });

  auto* lff = ldoi->add_subcommand("from-factors", "build the triple of a factor pair");
  lff->fallthrough();
  std::string lff_file, lff_out;
  lff->add_option("file", lff_file, "factor file with v and w")->required();
  lff->add_option("-o,--out", lff_out, "write the triple here");
  lff->callback([&] { code = run_ldoi_from_factors(lff_file, lff_out); });

  auto* twirl = app.add_subcommand("twirl", "twirl a Choi matrix or apply it as a map");
  twirl->require_subcommand(1);
  twirl->fallthrough();

  std::string tw_files[3], tw_outs[3];
  const char* tw_kinds[3] = {"equal", "parallel", "cross"};
  const char* tw_help[3] = {"average over equal phases on both sides",
                            "average over paired left and right phases",
                            "average over crossed left and right phases"};
  for (int k = 0; k < 3; ++k) {
    auto* sub = twirl->add_subcommand(tw_kinds[k], tw_help[k]);
    sub->fallthrough();
    sub->add_option("file", tw_files[k], "Choi matrix file")->required();
    sub->add_option("-o,--out", tw_outs[k], "write the twirled Choi matrix here");
    sub->callback([&, k] { code = run_twirl(tw_kinds[k], tw_files[k], tw_outs[k]); });
  }

  auto* ta = twirl->add_subcommand("apply", "apply the map of a Choi matrix to a d x d matrix");
  ta->fallthrough();
  std::string ta_choi, ta_x;
  ta->add_option("choi", ta_choi, "Choi matrix file")->required();
  ta->add_option("x", ta_x, "input matrix file")->required();
  ta->callback([&] { code = run_twirl_apply(ta_choi, ta_x); });

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->fallthrough();
  std::vector<int> st_only;
  selftest->add_option("--only", st_only, "run these criteria ids only");
  selftest->callback([&] { code = run_selftest(st_only); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
