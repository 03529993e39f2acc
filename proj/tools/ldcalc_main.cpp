#include <CLI11.hpp>

#include <iostream>

#include "ldcalc/algebra.hpp"
#include "ldcalc/errors.hpp"
#include "ldcalc/frontend.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/rdf_model.hpp"
#include "ldcalc/selftest.hpp"

namespace {

constexpr int kUsage = 64;
constexpr int kParse = 65;
constexpr int kNoInput = 66;
constexpr int kCap = 70;

struct FileError : ldc::Error {
  using Error::Error;
};

std::string slurp(const std::string& path) {
  try {
    return ldc::read_file(path);
  } catch (const ldc::Error& e) {
    throw FileError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linked Data query calculus: evaluation, labelled transitions, bisimulation and rewriting"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string store_file, alias_file, pool_text;
  unsigned iter_bound = 2, depth = 3, steps = 1;
  std::uint64_t seed = 1;
  app.add_option("--store", store_file, "triple store file");
  app.add_option("--alias", alias_file, "alias assumptions file");
  app.add_option("--iter-bound", iter_bound, "copies available to the bangs of one query");
  app.add_option("--depth", depth, "exploration depth for equivalence checks");
  app.add_option("--pool", pool_text, "extra select candidates, comma separated");
  app.add_option("--seed", seed, "seed for step choices and selftest draws");

  std::string file, file_b, goal = "normalize", size = "full";
  auto* eval = app.add_subcommand("eval", "print all commitments of a process");
  eval->add_option("file", file)->required();
  auto* step = app.add_subcommand("step", "follow commitments");
  step->add_option("-n", steps, "number of steps");
  step->add_option("file", file)->required();
  auto* lts = app.add_subcommand("lts", "print labelled transitions");
  lts->add_option("file", file)->required();
  auto* equiv = app.add_subcommand("equiv", "bounded bisimilarity of two processes or queries");
  equiv->add_option("a", file)->required();
  equiv->add_option("b", file_b)->required();
  auto* leq = app.add_subcommand("leq", "query preorder a <= b");
  leq->add_option("a", file)->required();
  leq->add_option("b", file_b)->required();
  auto* rewrite = app.add_subcommand("rewrite", "rewrite a query");
  rewrite->add_option("--goal", goal)->check(CLI::IsMember({"normalize", "prune", "distribute"}));
  rewrite->add_option("file", file)->required();
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite at desk scale");
  selftest->add_option("--size", size)->check(CLI::IsMember({"small", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    ldc::Workspace ws;
    if (!store_file.empty()) ws.store = ldc::parse_store(slurp(store_file));
    if (!alias_file.empty()) ws.alias = ldc::parse_alias(slurp(alias_file));
    ws.extras = ldc::parse_pool(pool_text);
    ws.iter_bound = iter_bound;
    ws.depth = depth;

    if (*eval) {
      std::cout << ldc::eval_report(ws, ldc::parse_program(slurp(file)));
    } else if (*step) {
      std::cout << ldc::step_report(ws, ldc::parse_program(slurp(file)), steps, seed);
    } else if (*lts) {
      std::cout << ldc::lts_report(ws, ldc::parse_program(slurp(file)));
    } else if (*equiv) {
      auto p = ws.attach(ldc::parse_program(slurp(file)));
      auto q = ws.attach(ldc::parse_program(slurp(file_b)));
      auto r = ldc::bisimilar(p, q, ws.config(), depth);
      std::cout << ldc::equiv_report("equiv", r);
      return ldc::exit_code(r);
    } else if (*leq) {
      auto r = ldc::query_leq(ldc::parse_query(slurp(file)), ldc::parse_query(slurp(file_b)),
                              ws.config(), depth);
      std::cout << ldc::equiv_report("leq", r);
      return ldc::exit_code(r);
    } else if (*rewrite) {
      auto q = ldc::parse_query(slurp(file));
      ldc::EvalConfig cfg = ws.config();
      ldc::RewriteReport r;
      if (goal == "normalize") {
        r = ldc::normalize(q);
        ldc::certify(r, cfg, depth);
      } else if (goal == "prune") {
        r = ldc::prune_dominated(q, cfg, depth);
      } else {
        r = ldc::factor_for_distribution(q, cfg, depth);
      }
      std::cout << ldc::rewrite_report(goal, r);
    } else if (*selftest) {
      ldc::SelftestOptions o;
      o.small = size == "small";
      o.seed = seed;
      o.params.iter_bound = iter_bound;
      o.params.depth = depth;
      return ldc::run_selftest(o, std::cout) == 0 ? 0 : 1;
    }
    return 0;
  } catch (const ldc::ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return kParse;
  } catch (const ldc::StateExplosion& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCap;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoInput;
  } catch (const ldc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
}
