#include "anon/cli.hpp"

#include "anon/emd.hpp"
#include "anon/kanon.hpp"
#include "anon/ldiv.hpp"
#include "anon/milp.hpp"
#include "anon/rational.hpp"
#include "anon/reductions.hpp"
#include "anon/table.hpp"
#include "anon/tclose.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace anon {

namespace {

struct Config {
  std::string table_path;
  std::string space_arg = "equal";
  std::string partition_path;
  std::string principle;
  std::string algo = "exact";
  std::string t_str = "0";
  long long k = 1;
  long long l = 2;
  bool split_digits = false;
  bool allow_pad = false;

  std::string out_partition;
  std::string out_table;
  std::string report_path;
  bool quiet = false;

  // Guards.
  std::size_t oracle_max_n = 12;
  std::size_t exact_max_n = 20;
  unsigned long long max_assignments = 10'000'000;
  bool unsafe_limits = false;

  // emd
  std::string x_str, y_str;

  // gen / verify
  std::string name;
  std::string graph_path;
  std::string sys_path;
  std::string c_str;
  std::string out_prefix = "out";
  std::size_t n = 0;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

TcloseOptions guard_options(const Config& cfg) {
  if (!cfg.unsafe_limits &&
      (cfg.oracle_max_n > 12 || cfg.exact_max_n > 20 ||
       cfg.max_assignments > 10'000'000)) {
    throw std::invalid_argument(
        "raising guard limits requires --unsafe-limits");
  }
  TcloseOptions opts;
  opts.oracle_max_n = cfg.oracle_max_n;
  opts.exact_max_n = cfg.exact_max_n;
  return opts;
}

Table load_table(const Config& cfg) {
  if (cfg.table_path.empty()) {
    throw std::invalid_argument("--table is required");
  }
  CsvOptions o;
  o.split_digits = cfg.split_digits;
  o.allow_pad = cfg.allow_pad;
  return load_table_csv(cfg.table_path, o);
}

SaSpace resolve_space(const Table& table, const std::string& arg) {
  // `equal` builds the equal-distance space over the table's SA values in
  // first-appearance order.
  if (arg == "equal") return equal_distance_space(table.sa_values());
  return load_space(arg);
}

class Reporter {
 public:
  Reporter(bool quiet, std::string path)
      : quiet_(quiet), path_(std::move(path)) {}
  void line(const std::string& s) {
    if (!quiet_) std::cout << s << "\n";
    buffer_ += s + "\n";
  }
  ~Reporter() {
    if (!path_.empty()) {
      std::ofstream out(path_);
      if (out) out << buffer_;
    }
  }

 private:
  bool quiet_;
  std::string path_;
  std::string buffer_;
};

int cmd_anonymize(const Config& cfg) {
  TcloseOptions opts = guard_options(cfg);
  Table table = load_table(cfg);
  SolveResult res;

  if (cfg.principle == "tclose") {
    Rational t = parse_rational(cfg.t_str);
    if (t < 0 || t > 1) throw std::invalid_argument("t must be in [0,1]");
    SaSpace space = resolve_space(table, cfg.space_arg);
    if (cfg.algo == "exact") {
      res = exact_tclose(table, t, space, opts);
    } else if (cfg.algo == "oracle") {
      res = brute_force_tclose(table, t, space, opts);
    } else if (cfg.algo == "milp") {
      MilpModel model = build_milp(table, t, space);
      MilpSolveOptions mopts;
      mopts.max_assignments = cfg.max_assignments;
      res = solve_milp_small(model, table, t, space, mopts);
    } else {
      throw std::invalid_argument("unknown tclose algorithm: " + cfg.algo);
    }
  } else if (cfg.principle == "kanon") {
    if (cfg.k < 1) throw std::invalid_argument("k must be at least 1");
    KAnonInstance inst{table, cfg.k};
    if (cfg.algo == "approx") {
      res = approx_k_anonymity(inst);
    } else if (cfg.algo == "exact") {
      res = exact_k_anonymity(inst, opts);
    } else if (cfg.algo == "oracle") {
      res = brute_force_k_anonymity(inst, opts);
    } else {
      throw std::invalid_argument("unknown kanon algorithm: " + cfg.algo);
    }
  } else if (cfg.principle == "ldiv") {
    if (cfg.l != 2) {
      throw std::invalid_argument("only l=2 is solvable; use --l 2");
    }
    res = solve_2diversity(table, opts);
  } else {
    throw std::invalid_argument("unknown principle: " + cfg.principle);
  }

  Reporter rep(cfg.quiet, cfg.report_path);
  if (!res.feasible()) {
    rep.line("infeasible");
    if (!cfg.out_partition.empty()) {
      write_file(cfg.out_partition, "infeasible\n");
    }
    return 2;
  }
  rep.line("cost=" + std::to_string(*res.cost));
  if (!cfg.out_partition.empty()) {
    write_file(cfg.out_partition, partition_to_text(*res.partition, *res.cost));
  }
  if (!cfg.out_table.empty()) {
    write_file(cfg.out_table, generalized_to_csv(table, *res.partition));
  }
  return 0;
}

int cmd_check(const Config& cfg) {
  Table table = load_table(cfg);
  if (cfg.partition_path.empty()) {
    throw std::invalid_argument("--partition is required");
  }
  std::ifstream in(cfg.partition_path);
  if (!in) {
    throw std::invalid_argument("cannot open partition file: " +
                                cfg.partition_path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::optional<Partition> parsed = parse_partition_text(buf.str());
  if (!parsed) throw std::invalid_argument("partition file says infeasible");
  std::string reason;
  if (!validate_partition(table, *parsed, &reason)) {
    throw std::invalid_argument("invalid partition: " + reason);
  }

  Reporter rep(cfg.quiet, cfg.report_path);
  long long bad = -1;
  if (cfg.principle == "tclose") {
    Rational t = parse_rational(cfg.t_str);
    if (t < 0 || t > 1) throw std::invalid_argument("t must be in [0,1]");
    SaSpace space = resolve_space(table, cfg.space_arg);
    Group all;
    for (std::size_t i = 0; i < table.num_rows(); ++i) all.rows.push_back(i);
    DistributionVector td = distribution(table, all, space);
    for (std::size_t i = 0; i < parsed->groups.size(); ++i) {
      DistributionVector gd = distribution(table, parsed->groups[i], space);
      Rational e = emd_general(gd, td, space);
      bool ok = e <= t;
      rep.line("group=" + std::to_string(i) +
               " size=" + std::to_string(parsed->groups[i].rows.size()) +
               " emd=" + format_rational(e) + " ok=" + (ok ? "yes" : "no"));
      if (!ok && bad < 0) bad = static_cast<long long>(i);
    }
  } else if (cfg.principle == "kanon") {
    for (std::size_t i = 0; i < parsed->groups.size(); ++i) {
      bool ok = static_cast<long long>(parsed->groups[i].rows.size()) >= cfg.k;
      rep.line("group=" + std::to_string(i) +
               " size=" + std::to_string(parsed->groups[i].rows.size()) +
               " ok=" + (ok ? "yes" : "no"));
      if (!ok && bad < 0) bad = static_cast<long long>(i);
    }
  } else if (cfg.principle == "ldiv") {
    for (std::size_t i = 0; i < parsed->groups.size(); ++i) {
      bool ok = is_l_diverse(table, parsed->groups[i], cfg.l);
      rep.line("group=" + std::to_string(i) +
               " size=" + std::to_string(parsed->groups[i].rows.size()) +
               " ok=" + (ok ? "yes" : "no"));
      if (!ok && bad < 0) bad = static_cast<long long>(i);
    }
  } else {
    throw std::invalid_argument("unknown principle: " + cfg.principle);
  }
  if (bad >= 0) {
    rep.line("violation group=" + std::to_string(bad));
    return 2;
  }
  rep.line("ok");
  return 0;
}

int cmd_emd(const Config& cfg) {
  DistributionVector x = parse_distribution(cfg.x_str);
  DistributionVector y = parse_distribution(cfg.y_str);
  SaSpace space = cfg.space_arg == "equal" ? equal_distance_space(x.size())
                                           : load_space(cfg.space_arg);
  std::cout << format_rational(emd_general(x, y, space)) << "\n";
  return 0;
}

int cmd_gen(const Config& cfg) {
  GeneratedInstance inst = [&]() {
    if (cfg.name == "bisection") {
      return gen_bisection_table(load_graph(cfg.graph_path));
    }
    if (cfg.name == "scaled") {
      Config tcfg = cfg;
      return gen_scaled_anonymity_table(load_table(tcfg),
                                        parse_rational(cfg.c_str));
    }
    if (cfg.name == "halfclique") {
      return gen_halfclique_table(load_graph(cfg.graph_path),
                                  parse_rational(cfg.c_str));
    }
    if (cfg.name == "3dm3") {
      return gen_3dm_tclose3(load_3dm(cfg.sys_path));
    }
    if (cfg.name == "3dm4") {
      return gen_3dm_tclose4(load_3dm(cfg.sys_path),
                             parse_rational(cfg.t_str));
    }
    throw std::invalid_argument("unknown generator: " + cfg.name);
  }();

  write_file(cfg.out_prefix + ".csv", table_to_csv(inst.table));
  if (inst.space) {
    write_file(cfg.out_prefix + ".space", space_to_text(*inst.space));
  }
  write_file(cfg.out_prefix + ".meta", metadata_to_text(inst.metadata));

  Reporter rep(cfg.quiet, cfg.report_path);
  rep.line("rows=" + std::to_string(inst.table.num_rows()));
  rep.line("cols=" + std::to_string(inst.table.num_qi()));
  if (inst.space) {
    Group all;
    for (std::size_t i = 0; i < inst.table.num_rows(); ++i) {
      all.rows.push_back(i);
    }
    DistributionVector p = distribution(inst.table, all, *inst.space);
    std::string s = "p=";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s += ",";
      s += format_rational(p.mass[i]);
    }
    rep.line(s);
  }
  for (const auto& [k, v] : inst.metadata) rep.line(k + "=" + v);
  return 0;
}

int cmd_verify(const Config& cfg) {
  TcloseOptions opts = guard_options(cfg);
  bool ok = false;
  if (cfg.name == "bisection") {
    ok = verify_bisection_identity(load_graph(cfg.graph_path), opts);
  } else if (cfg.name == "scaled") {
    Config tcfg = cfg;
    ok = verify_scaled_identity(load_table(tcfg), parse_rational(cfg.c_str),
                                opts);
  } else if (cfg.name == "halfclique") {
    ok = verify_halfclique(load_graph(cfg.graph_path),
                           parse_rational(cfg.c_str), opts);
  } else if (cfg.name == "3dm3") {
    ok = verify_3dm_tclose3(load_3dm(cfg.sys_path), opts);
  } else if (cfg.name == "3dm4") {
    ok = verify_3dm_tclose4(load_3dm(cfg.sys_path),
                            parse_rational(cfg.t_str), opts);
  } else if (cfg.name == "lemma1") {
    ok = verify_lemma1(cfg.n, cfg.k);
  } else {
    throw std::invalid_argument("unknown verifier: " + cfg.name);
  }
  Reporter rep(cfg.quiet, cfg.report_path);
  rep.line(std::string("verify=") + cfg.name + " result=" +
           (ok ? "pass" : "fail"));
  return ok ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"t-closeness / k-anonymity / 2-diversity toolkit"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--quiet", cfg.quiet, "suppress stdout");
    sub->add_option("--report", cfg.report_path, "key=value report file");
    sub->add_flag("--unsafe-limits", cfg.unsafe_limits,
                  "acknowledge raising guard limits");
    sub->add_option("--oracle-max-n", cfg.oracle_max_n);
    sub->add_option("--exact-max-n", cfg.exact_max_n);
    sub->add_option("--max-assignments", cfg.max_assignments);
  };
  auto add_table_opts = [&](CLI::App* sub) {
    sub->add_option("--table", cfg.table_path, "input table CSV");
    sub->add_flag("--split-digits", cfg.split_digits,
                  "split digit-string QI columns into per-digit QIs");
    sub->add_flag("--allow-pad", cfg.allow_pad,
                  "accept the reserved pad symbols (generated instances)");
    sub->add_option("--space", cfg.space_arg,
                    "space file path or `equal` (default)");
  };

  CLI::App* anonymize = app.add_subcommand("anonymize", "solve a principle");
  add_table_opts(anonymize);
  add_common(anonymize);
  anonymize->add_option("--principle", cfg.principle, "tclose|kanon|ldiv")
      ->required();
  anonymize->add_option("--algo", cfg.algo,
                        "exact|oracle|milp (tclose), approx|exact|oracle "
                        "(kanon)");
  anonymize->add_option("--t", cfg.t_str, "closeness threshold (rational)");
  anonymize->add_option("--k", cfg.k, "anonymity parameter");
  anonymize->add_option("--l", cfg.l, "diversity parameter (only 2)");
  anonymize->add_option("--out-partition", cfg.out_partition);
  anonymize->add_option("--out-table", cfg.out_table);

  CLI::App* check = app.add_subcommand("check", "check a partition");
  add_table_opts(check);
  add_common(check);
  check->add_option("--partition", cfg.partition_path)->required();
  check->add_option("--principle", cfg.principle)->required();
  check->add_option("--t", cfg.t_str);
  check->add_option("--k", cfg.k);
  check->add_option("--l", cfg.l);

  CLI::App* emd = app.add_subcommand("emd", "exact EMD of two distributions");
  add_common(emd);
  emd->add_option("--x", cfg.x_str)->required();
  emd->add_option("--y", cfg.y_str)->required();
  emd->add_option("--space", cfg.space_arg);

  CLI::App* gen = app.add_subcommand("gen", "generate a hardness instance");
  add_table_opts(gen);
  add_common(gen);
  gen->add_option("name", cfg.name, "bisection|scaled|halfclique|3dm3|3dm4")
      ->required();
  gen->add_option("--graph", cfg.graph_path);
  gen->add_option("--sys", cfg.sys_path);
  gen->add_option("--c", cfg.c_str);
  gen->add_option("--t", cfg.t_str);
  gen->add_option("--out-prefix", cfg.out_prefix);

  CLI::App* verify = app.add_subcommand("verify", "run an identity verifier");
  add_table_opts(verify);
  add_common(verify);
  verify
      ->add_option("name", cfg.name,
                   "bisection|scaled|halfclique|3dm3|3dm4|lemma1")
      ->required();
  verify->add_option("--graph", cfg.graph_path);
  verify->add_option("--sys", cfg.sys_path);
  verify->add_option("--c", cfg.c_str);
  verify->add_option("--t", cfg.t_str);
  verify->add_option("--n", cfg.n);
  verify->add_option("--k", cfg.k);

  std::vector<const char*> argv;
  argv.push_back("anon");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (anonymize->parsed()) return cmd_anonymize(cfg);
    if (check->parsed()) return cmd_check(cfg);
    if (emd->parsed()) return cmd_emd(cfg);
    if (gen->parsed()) return cmd_gen(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace anon
