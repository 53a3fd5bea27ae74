// toric-markov: minimal Markov bases of toric ideals from the command line.

#include "toric/exactla.hpp"
#include "toric/fibergraph.hpp"
#include "toric/io.hpp"
#include "toric/markov.hpp"
#include "toric/prufer.hpp"
#include "toric/seedbasis.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace toric;

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kNotConfiguration = 3, kBudget = 4, kSeedRejected = 5 };

struct Options {
  std::string matrix;
  std::string file;
  std::string format = "rows";
  std::size_t limit = 100'000;
  std::size_t count = 1;
  std::uint64_t rng_seed = 0;
  std::string seed_basis;
  std::size_t fiber_limit = 1'000'000;
  std::size_t pairs_budget = 1'000'000;
  std::string key;
  bool dot = false;
  std::string moves;
  std::string prufer;
  std::size_t prufer_n = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OutputFormat output_format(const Options& o) {
  if (o.format == "json") return OutputFormat::json;
  if (o.format == "binomials") return OutputFormat::binomials;
  return OutputFormat::rows;
}

ConfigMatrix load_matrix(const Options& o) {
  if (o.matrix.empty() == o.file.empty())
    throw CLI::ValidationError("give the matrix either inline or with --file");
  return admit_matrix(parse_matrix(o.file.empty() ? o.matrix : read_file(o.file)));
}

MarkovOptions markov_options(const ConfigMatrix& A, const Options& o) {
  MarkovOptions m;
  m.fibers.max_elements = o.fiber_limit;
  m.seed.budget.max_pairs = o.pairs_budget;
  if (!o.seed_basis.empty()) {
    auto blocks = parse_move_blocks(read_file(o.seed_basis), A.cols());
    std::vector<IntVector> all;
    for (auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    m.seed_basis = std::move(all);
  }
  return m;
}

int run(CLI::App& app, const Options& o) {
  auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
  if (!sub) throw CLI::CallForHelp();
  const std::string name = sub->get_name();
  const auto fmt = output_format(o);

  if (name == "prufer") {
    std::vector<std::size_t> seq;
    if (!o.prufer.empty()) {
      auto m = parse_matrix(o.prufer);
      for (auto v : m[0]) {
        if (v < 0) throw BadSequenceError("negative label");
        seq.push_back(static_cast<std::size_t>(v));
      }
    }
    auto n = o.prufer_n ? o.prufer_n : seq.size() + 2;
    auto edges = prufer_tree(seq, n);
    std::string s;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i) s += ' ';
      s += "{" + std::to_string(edges[i].first) + "," + std::to_string(edges[i].second) + "}";
    }
    std::cout << s << '\n';
    return kOk;
  }

  auto A = load_matrix(o);
  auto mo = markov_options(A, o);

  if (name == "seed") {
    auto seed = mo.seed_basis ? accept_seed_basis(A, *mo.seed_basis, mo.fibers)
                              : seed_markov_basis(A, mo.seed, mo.fibers);
    std::cout << render_basis(A, seed, fmt);
    return kOk;
  }
  if (name == "fiber-graph" && !o.key.empty()) {
    auto key = parse_matrix(o.key)[0];
    if (key.size() != A.rows()) throw CLI::ValidationError("--key length must equal the row count");
    auto g = fiber_graph(A, key, mo.fibers);
    std::cout << (o.dot ? render_dot(g) : render_fiber_graphs(A, {g}, fmt));
    return kOk;
  }

  auto fibers = generating_fibers(A, mo);
  if (name == "count") {
    std::cout << render_count(A, count_markov(fibers), fmt);
  } else if (name == "bases") {
    std::cout << render_bases(A, collect_markov_bases(A, std::move(fibers), o.limit),
                              BasisKind::minimal, fmt);
  } else if (name == "minimize") {
    MarkovBasesStream s(A, std::move(fibers));
    std::cout << render_basis(A, *s.next(), fmt);
  } else if (name == "random") {
    auto samples = random_markov(A, fibers, o.rng_seed, o.count);
    std::cout << (samples.size() == 1 ? render_basis(A, samples[0], fmt)
                                      : render_bases(A, samples, BasisKind::sample, fmt));
  } else if (name == "indispensable") {
    std::cout << render_basis(A, indispensable_set(A, fibers), fmt);
  } else if (name == "universal") {
    std::cout << render_basis(A, universal_markov(A, fibers), fmt);
  } else if (name == "fiber-graph") {
    if (o.dot)
      for (const auto& g : fibers) std::cout << render_dot(g);
    else
      std::cout << render_fiber_graphs(A, fibers, fmt);
  } else if (name == "verify") {
    if (o.moves.empty()) throw CLI::ValidationError("verify needs --moves FILE");
    for (const auto& block : parse_move_blocks(read_file(o.moves), A.cols())) {
      std::vector<Move> ms;
      for (const auto& z : block) ms.push_back(Move::from_vector(A, z));
      auto v = verify_markov_basis(A, ms, fibers);
      std::cout << "generates=" << (v.generates ? "true" : "false")
                << " minimal=" << (v.minimal ? "true" : "false");
      if (v.certificate)
        std::cout << " disconnected fiber " << to_string(v.certificate->fiber_key, " ") << ": "
                  << to_string(v.certificate->first, " ") << " | "
                  << to_string(v.certificate->second, " ");
      std::cout << '\n';
    }
  }
  return kOk;
}

template <class... Ts>
bool is_any(const std::exception& e) {
  return (... || (dynamic_cast<const Ts*>(&e) != nullptr));
}

int exit_code(const std::exception& e, bool supplied_seed) {
  if (is_any<CLI::Error, ParseError, RaggedMatrixError, EmptyMatrixError, BadSequenceError>(e))
    return kUsage;
  if (is_any<NotConfigurationError, ZeroColumnError>(e)) return kNotConfiguration;
  if (is_any<BudgetExceededError, LimitExceededError, FiberTooLargeError>(e)) return kBudget;
  if (is_any<SeedRejectedError>(e)) return kSeedRejected;
  if (is_any<MovesNotInKernelError>(e)) return supplied_seed ? kSeedRejected : kUsage;
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal Markov bases of toric ideals via fiber graphs"};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("TORIC_MARKOV_FIBER_LIMIT")) o.fiber_limit = std::stoull(env);

  auto add_matrix = [&](CLI::App* s) {
    s->add_option("matrix", o.matrix, "matrix such as \"7,8,9,10\" or \"1 0; 0 1\"");
    s->add_option("--file", o.file, "read the matrix from a file");
    s->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"rows", "json", "binomials"}));
    s->add_option("--seed-basis", o.seed_basis, "use this generating set instead of completion");
    s->add_option("--fiber-limit", o.fiber_limit, "largest fiber to enumerate");
    s->add_option("--pairs-budget", o.pairs_budget, "S-pair budget of the completion");
  };

  add_matrix(app.add_subcommand("seed", "a (not necessarily minimal) Markov basis"));
  auto* bases = app.add_subcommand("bases", "every minimal Markov basis");
  add_matrix(bases);
  bases->add_option("--limit", o.limit, "refuse to list more bases than this");
  add_matrix(app.add_subcommand("count", "number of minimal Markov bases"));
  auto* random = app.add_subcommand("random", "uniformly random minimal Markov bases");
  add_matrix(random);
  random->add_option("--count", o.count, "number of samples")->check(CLI::PositiveNumber);
  random->add_option("--rng-seed", o.rng_seed, "mt19937_64 seed");
  add_matrix(app.add_subcommand("indispensable", "moves in every minimal Markov basis"));
  add_matrix(app.add_subcommand("universal", "moves in some minimal Markov basis"));
  add_matrix(app.add_subcommand("minimize", "the first minimal Markov basis"));
  auto* fg = app.add_subcommand("fiber-graph", "fiber graphs of the generating fibers");
  add_matrix(fg);
  fg->add_option("--key", o.key, "a single fiber key t instead of the generating fibers");
  fg->add_flag("--dot", o.dot, "Graphviz output");
  auto* verify = app.add_subcommand("verify", "check that move sets are (minimal) Markov bases");
  add_matrix(verify);
  verify->add_option("--moves", o.moves, "file with one or more move sets")->required();
  auto* prufer = app.add_subcommand("prufer", "labelled tree of a Pruefer sequence");
  prufer->add_option("--seq,--prufer", o.prufer, "sequence such as 0,0,2,4");
  prufer->add_option("--n", o.prufer_n, "vertex count (default: length + 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    return run(app, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e, !o.seed_basis.empty());
  }
}
