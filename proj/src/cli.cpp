#include "patchwork/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>

#include "patchwork/bitwise.hpp"
#include "patchwork/export.hpp"
#include "patchwork/magma.hpp"
#include "patchwork/suites.hpp"
#include "patchwork/surface.hpp"

namespace patchwork {

namespace {

struct OperatorFlags {
  std::string literal;
  std::string builtin;
  std::string table;
  std::optional<std::uint32_t> p;
};

struct GridFlags {
  std::string domain;
  std::string u_range;
  std::string v_range;
  std::string res = "256";
  int frac = kDefaultFracDigits;
  unsigned threads = 0;
};

struct Options {
  std::string config;
  OperatorFlags op;
  GridFlags grid;
  std::optional<std::uint32_t> q;
  std::string args;
  std::optional<int> depth;
  std::string format = "pgm";
  std::string out;
  std::string out_dir = ".";
  std::string prefix = "sweep";
  std::string q_list;
  int csv_digits = 12;
  std::string suite;
  std::optional<std::size_t> trials;
  std::uint32_t q_max = 301;
  std::uint64_t seed = 1;
  std::string figure = "all";
  std::optional<std::size_t> reproduce_res;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) {
      return parts;
    }
    start = pos + 1;
  }
}

template <typename T>
T parse_number(const std::string& flag, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw FlagError(flag, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

MagmaOp resolve_operator(const OperatorFlags& flags) {
  const int chosen = !flags.literal.empty() + !flags.builtin.empty() + !flags.table.empty();
  if (chosen != 1) {
    throw FlagError("--op", "give exactly one of --op N:R:p, --builtin NAME or --table a0,a1,...");
  }
  if (!flags.literal.empty()) {
    try {
      return parse_operator_literal(flags.literal);
    } catch (const std::exception& e) {
      throw FlagError("--op", e.what());
    }
  }
  if (!flags.p) {
    throw FlagError("--p", "required with --builtin and --table");
  }
  if (!flags.builtin.empty()) {
    try {
      if (flags.builtin == "modadd") return mod_add_code(*flags.p);
      if (flags.builtin == "carry") return carry_code(*flags.p);
    } catch (const std::exception& e) {
      throw FlagError("--p", e.what());
    }
    throw FlagError("--builtin", "unknown builtin '" + flags.builtin + "' (modadd or carry)");
  }
  try {
    return parse_table_literal(flags.table, *flags.p);
  } catch (const std::exception& e) {
    throw FlagError("--table", e.what());
  }
}

std::pair<std::string, std::string> parse_range(const std::string& flag, const std::string& text) {
  const auto parts = split_list(text, ',');
  if (parts.size() != 2) {
    throw FlagError(flag, "expected 'min,max', got '" + text + "'");
  }
  for (const auto& part : parts) {
    try {
      parse_decimal(part);
    } catch (const std::exception&) {
      throw FlagError(flag, "bound '" + part + "' is not a decimal number");
    }
  }
  if (parse_decimal(parts[0]) >= parse_decimal(parts[1])) {
    throw FlagError(flag, "min must be below max in '" + text + "'");
  }
  if (parse_decimal(parts[0]) < 0) {
    throw FlagError(flag, "negative coordinates are not supported");
  }
  return {parts[0], parts[1]};
}

Domain resolve_domain(const GridFlags& flags, const std::string& fallback) {
  const auto [lo, hi] = parse_range("--domain", flags.domain.empty() ? fallback : flags.domain);
  Domain d = Domain::square(lo, hi);
  if (!flags.u_range.empty()) {
    std::tie(d.u_min, d.u_max) = parse_range("--u-range", flags.u_range);
  }
  if (!flags.v_range.empty()) {
    std::tie(d.v_min, d.v_max) = parse_range("--v-range", flags.v_range);
  }
  return d;
}

Resolution resolve_resolution(const std::string& text) {
  const auto x = text.find('x');
  Resolution res;
  if (x == std::string::npos) {
    res.nu = res.nv = parse_number<std::size_t>("--res", text);
  } else {
    res.nu = parse_number<std::size_t>("--res", std::string_view(text).substr(0, x));
    res.nv = parse_number<std::size_t>("--res", std::string_view(text).substr(x + 1));
  }
  if (res.nu < 2 || res.nv < 2) {
    throw FlagError("--res", "each side needs at least 2 samples");
  }
  if (res.nu * res.nv > 16'777'216) {
    throw FlagError("--res", "grid larger than 4096x4096");
  }
  return res;
}

void check_frac(int frac) {
  if (frac < 0 || frac > 64) {
    throw FlagError("--frac", "fractional digits must lie in [0, 64]");
  }
}

// Keeps operator tables enumerable on the command line.
void check_cli_operator(const MagmaOp& op) {
  if (op.arity() > 4 || table_size(op.radix(), op.arity()) > 4096) {
    throw FlagError("--op", "command-line operators are limited to N <= 4 and p^N <= 4096");
  }
}

std::uint32_t resolve_q(const Options& o, const MagmaOp& op) {
  const std::uint32_t q = o.q.value_or(op.radix());
  if (q < 2) {
    throw FlagError("--q", "q must be >= 2");
  }
  return q;
}

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string format_coeffs(const BitwiseResult& r) {
  if (!r.k_max()) {
    return "(empty)";
  }
  const bool wide = r.in_radix() > 36;
  std::string out;
  const int top = std::max(*r.k_max(), 0);
  const int bottom = std::min(r.low_index(), 0);
  for (int k = top; k >= bottom; --k) {
    if (k == -1) {
      out += '.';
    } else if (wide && k != top) {
      out += ':';
    }
    const Digit d = r.coeff(k);
    out += wide ? std::to_string(d) : std::string(1, static_cast<char>(d < 10 ? '0' + d : 'a' + d - 10));
  }
  return out;
}

void write_output(const std::filesystem::path& path, const std::string& content, const char* flag) {
  try {
    atomic_write(path, content);
  } catch (const std::exception& e) {
    throw FlagError(flag, e.what(), 1);
  }
}

void report_grid(std::ostream& out, const std::filesystem::path& path, const SurfaceGrid& grid,
                 const std::string& content) {
  const HeightSummary s = summarize(grid.values());
  char crc[16];
  std::snprintf(crc, sizeof crc, "%08x", checksum(content));
  out << "wrote " << path.string() << "  op=" << to_literal(grid.op()) << " q=" << grid.q()
      << " min=" << fixed(s.min) << " max=" << fixed(s.max)
      << " H=" << fixed(grid.roughness_exponent()) << " crc32=" << crc << '\n';
}

int cmd_eval(const Options& o, std::ostream& out) {
  const MagmaOp op = resolve_operator(o.op);
  check_cli_operator(op);
  const std::uint32_t q = resolve_q(o, op);
  check_frac(o.grid.frac);
  if (o.args.empty()) {
    throw FlagError("--args", "required");
  }
  std::vector<RadixFixed> operands;
  for (const auto& text : split_list(o.args, ',')) {
    try {
      operands.push_back(RadixFixed::from_decimal_string(text, op.radix(), o.grid.frac));
    } catch (const std::exception& e) {
      throw FlagError("--args", e.what());
    }
  }
  if (operands.size() != op.arity()) {
    throw FlagError("--args", "operator " + to_literal(op) + " takes " +
                                  std::to_string(op.arity()) + " arguments, got " +
                                  std::to_string(operands.size()));
  }
  BitwiseResult r = bitwise_eval(op, operands, q);
  if (o.depth) {
    r = coarse_grain_result(r, *o.depth);
  }
  const Rational value = r.value();
  out << "operator  " << to_literal(op) << '\n'
      << "q         " << q << '\n'
      << "H         " << fixed(r.roughness_exponent()) << '\n'
      << "k_max     " << (r.k_max() ? std::to_string(*r.k_max()) : "none") << '\n'
      << "coeffs    " << format_coeffs(r) << '\n'
      << "value     " << to_fraction_string(value) << '\n'
      << "decimal   " << to_decimal_string(value, o.grid.frac) << '\n';
  return 0;
}

int cmd_surface(const Options& o, std::ostream& out) {
  SurfaceSpec spec{.op = resolve_operator(o.op), .q = 2, .domain = {}, .resolution = {},
                   .frac_digits = kDefaultFracDigits, .coarse_depth = std::nullopt, .workers = 0};
  check_cli_operator(spec.op);
  if (spec.op.arity() != 2) {
    throw FlagError("--op", "surfaces need a binary operator");
  }
  spec.q = resolve_q(o, spec.op);
  spec.domain = resolve_domain(o.grid, "0,100");
  spec.resolution = resolve_resolution(o.grid.res);
  check_frac(o.grid.frac);
  spec.frac_digits = o.grid.frac;
  spec.coarse_depth = o.depth;
  spec.workers = o.grid.threads;
  const OutputFormat format = [&] {
    try {
      return parse_output_format(o.format);
    } catch (const std::exception& e) {
      throw FlagError("--format", e.what());
    }
  }();
  if (o.out.empty()) {
    throw FlagError("--out", "required");
  }
  const SurfaceGrid grid = sample_surface(spec);
  const std::string content = render(grid, format, o.csv_digits);
  write_output(o.out, content, "--out");
  report_grid(out, o.out, grid, content);
  return 0;
}

std::vector<std::uint32_t> parse_q_list(const std::string& text) {
  if (text.empty()) {
    throw FlagError("--q-list", "required");
  }
  std::vector<std::uint32_t> qs;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = parse_number<std::uint32_t>("--q-list", trim(text.substr(0, dots)));
    const auto hi = parse_number<std::uint32_t>("--q-list", trim(text.substr(dots + 2)));
    if (lo > hi || hi - lo > 1000) {
      throw FlagError("--q-list", "bad range '" + text + "'");
    }
    for (auto q = lo; q <= hi; ++q) {
      qs.push_back(q);
    }
  } else {
    for (const auto& part : split_list(text, ',')) {
      qs.push_back(parse_number<std::uint32_t>("--q-list", part));
    }
  }
  for (auto q : qs) {
    if (q < 2) {
      throw FlagError("--q-list", "every q must be >= 2");
    }
  }
  return qs;
}

std::filesystem::path output_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw FlagError("--out-dir", "cannot create directory '" + dir + "'");
  }
  return dir;
}

OutputFormat resolve_format(const std::string& name) {
  try {
    return parse_output_format(name);
  } catch (const std::exception& e) {
    throw FlagError("--format", e.what());
  }
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const MagmaOp op = resolve_operator(o.op);
  check_cli_operator(op);
  const auto qs = parse_q_list(o.q_list);
  const Domain domain = resolve_domain(o.grid, "0,100");
  const Resolution res = resolve_resolution(o.grid.res);
  check_frac(o.grid.frac);
  const OutputFormat format = resolve_format(o.format);
  const auto dir = output_dir(o.out_dir);
  const auto grids = q_sweep(op, domain, res, o.grid.frac, qs, o.grid.threads);
  for (const auto& grid : grids) {
    const auto path =
        dir / (o.prefix + "_q" + std::to_string(grid.q()) + std::string(format_extension(format)));
    const std::string content = render(grid, format, o.csv_digits);
    write_output(path, content, "--out-dir");
    report_grid(out, path, grid, content);
  }
  return 0;
}

int cmd_check(const Options& o, std::ostream& out) {
  Suite suite{};
  try {
    suite = parse_suite(o.suite);
  } catch (const std::exception& e) {
    throw FlagError("suite", e.what());
  }
  SuiteOptions options;
  options.trials = o.trials;
  options.p = o.op.p;
  if (options.p && *options.p < 2) {
    throw FlagError("--p", "radix must be >= 2");
  }
  if (!o.op.literal.empty()) {
    options.op = resolve_operator(o.op);
  }
  options.q_max = o.q_max;
  check_frac(o.grid.frac);
  options.frac_digits = o.grid.frac;
  options.seed = o.seed;
  const SuiteReport report = run_suite(suite, options);
  for (const auto& w : report.warnings) {
    out << "warning: " << w << '\n';
  }
  for (const auto& line : report.table) {
    out << line << '\n';
  }
  out << report.name << ": " << (report.passed() ? "PASS" : "FAIL") << " ("
      << report.trials - std::min(report.trials, report.failures) << "/" << report.trials
      << " trials";
  if (report.failures > report.trials) {
    out << ", " << report.failures << " failing checks";
  }
  out << ")\n";
  if (report.counterexample) {
    out << "counterexample: " << *report.counterexample << '\n';
  }
  return report.passed() ? 0 : 1;
}

struct FigurePanel {
  std::string name;
  std::string op;
  std::uint32_t q;
  std::optional<int> depth;
};

int reproduce_surfaces(const Options& o, std::ostream& out, const std::filesystem::path& dir,
                       const std::vector<FigurePanel>& panels, const std::string& domain,
                       std::size_t default_res) {
  const std::size_t n = o.reproduce_res.value_or(default_res);
  for (const auto& panel : panels) {
    SurfaceSpec spec{.op = parse_operator_literal(panel.op),
                     .q = panel.q,
                     .domain = Domain::square("0", domain),
                     .resolution = {n, n},
                     .frac_digits = o.grid.frac,
                     .coarse_depth = panel.depth,
                     .workers = o.grid.threads};
    const SurfaceGrid grid = sample_surface(spec);
    const std::string content = render_pgm(grid);
    const auto path = dir / (panel.name + ".pgm");
    write_output(path, content, "--out-dir");
    report_grid(out, path, grid, content);
  }
  return 0;
}

int cmd_reproduce(const Options& o, std::ostream& out) {
  static const std::vector<std::string> figures = {"fig1", "fig3", "fig4", "fig5", "fig6"};
  std::vector<std::string> chosen;
  if (o.figure == "all") {
    chosen = figures;
  } else if (std::find(figures.begin(), figures.end(), o.figure) != figures.end()) {
    chosen = {o.figure};
  } else {
    throw FlagError("figure", "unknown figure '" + o.figure + "' (fig1, fig3-fig6 or all)");
  }
  if (o.reproduce_res && *o.reproduce_res < 2) {
    throw FlagError("--res", "at least 2 samples per side");
  }
  check_frac(o.grid.frac);
  const auto dir = output_dir(o.out_dir);
  int status = 0;
  for (const auto& fig : chosen) {
    if (fig == "fig1") {
      const std::size_t n = o.reproduce_res.value_or(256);
      const IdentityField field =
          pointwise_identity_field(Domain::square("0", "1"), {n, n}, 2, o.grid.frac, o.grid.threads);
      const std::pair<const char*, const std::vector<Rational>*> parts[] = {
          {"fig1_f", &field.f}, {"fig1_g", &field.g}, {"fig1_h", &field.h}};
      for (const auto& [name, values] : parts) {
        const auto path = dir / (std::string(name) + ".pgm");
        const auto doubles = IdentityField::to_doubles(*values);
        const std::string content = render_pgm(doubles, n, n, std::string("patchwork ") + name);
        write_output(path, content, "--out-dir");
        const HeightSummary s = summarize(doubles);
        out << "wrote " << path.string() << "  min=" << fixed(s.min) << " max=" << fixed(s.max)
            << '\n';
      }
      out << "fig1 identity f = g + h: " << (field.identity_holds ? "holds" : "VIOLATED") << '\n';
      if (!field.identity_holds) {
        status = 1;
      }
    } else if (fig == "fig3") {
      reproduce_surfaces(o, out, dir, {{"fig3", "2:13903:3", 3, std::nullopt}}, "200", 512);
    } else if (fig == "fig4") {
      reproduce_surfaces(o, out, dir,
                         {{"fig4_2-6-2", "2:6:2", 2, std::nullopt},
                          {"fig4_2-7417-3", "2:7417:3", 3, std::nullopt},
                          {"fig4_2-9407-3", "2:9407:3", 3, std::nullopt},
                          {"fig4_2-13427417-5", "2:13427417:5", 5, std::nullopt}},
                         "100", 256);
    } else if (fig == "fig5") {
      std::vector<FigurePanel> panels;
      for (std::uint32_t q = 3; q <= 11; ++q) {
        panels.push_back({"fig5_q" + std::to_string(q), "2:13903:3", q, std::nullopt});
      }
      reproduce_surfaces(o, out, dir, panels, "100", 256);
    } else if (fig == "fig6") {
      reproduce_surfaces(o, out, dir,
                         {{"fig6_D0", "2:9815:3", 3, 0},
                          {"fig6_D-1", "2:9815:3", 3, -1},
                          {"fig6_D-2", "2:9815:3", 3, -2}},
                         "100", 256);
    }
  }
  return status;
}

void add_operator_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--op", o.op.literal, "Operator literal N:R:p, e.g. 2:13903:3");
  cmd->add_option("--builtin", o.op.builtin, "Builtin operator: modadd or carry (needs --p)");
  cmd->add_option("--table", o.op.table, "Operator table a0,a1,... (needs --p)");
  cmd->add_option("--p", o.op.p, "Radix for --builtin/--table");
}

void add_grid_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--domain", o.grid.domain, "Square domain 'min,max' for u and v (default 0,100)");
  cmd->add_option("--u-range", o.grid.u_range, "u range 'min,max'");
  cmd->add_option("--v-range", o.grid.v_range, "v range 'min,max'");
  cmd->add_option("--res", o.grid.res, "Samples per side, N or NUxNV")->capture_default_str();
  cmd->add_option("--frac", o.grid.frac, "Fractional radix-p digits kept per coordinate")
      ->capture_default_str();
  cmd->add_option("--threads", o.grid.threads, "Worker threads (0 = all cores)");
}

// Fills options of the selected subcommand that were not given on the command line.
void apply_config(const std::map<std::string, std::string>& config, CLI::App* cmd) {
  for (const auto& [key, value] : config) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() != 0) {
      continue;
    }
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

std::map<std::string, std::string> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FlagError("--config", "cannot read '" + path.string() + "'");
  }
  std::map<std::string, std::string> entries;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos || trim(std::string_view(body).substr(0, eq)).empty()) {
      throw FlagError("--config", path.string() + ":" + std::to_string(number) +
                                      ": expected key=value");
    }
    entries[trim(std::string_view(body).substr(0, eq))] =
        trim(std::string_view(body).substr(eq + 1));
  }
  return entries;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"patchwork: digit-function arithmetic and self-affine bitwise surfaces",
               "patchwork"};
  app.require_subcommand(1);
  app.add_option("--config", o.config, "Flat key=value file; command-line flags take precedence");

  auto* eval = app.add_subcommand("eval", "Evaluate b_q at one point");
  add_operator_flags(eval, o);
  eval->add_option("--q", o.q, "Output radix q (default p)");
  eval->add_option("--args", o.args, "Comma-separated decimal operands");
  eval->add_option("--frac", o.grid.frac, "Fractional radix-p digits kept per operand")
      ->capture_default_str();
  eval->add_option("--D", o.depth, "Coarse-graining depth D");

  auto* surface = app.add_subcommand("surface", "Sample b_q over a grid and write it");
  add_operator_flags(surface, o);
  add_grid_flags(surface, o);
  surface->add_option("--q", o.q, "Output radix q (default p)");
  surface->add_option("--D", o.depth, "Coarse-graining depth D");
  surface->add_option("--format", o.format, "pgm, csv or raw-rational")->capture_default_str();
  surface->add_option("--out", o.out, "Output file");
  surface->add_option("--csv-digits", o.csv_digits, "Decimal digits in CSV output")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Sample b_q for a list of q values");
  add_operator_flags(sweep, o);
  add_grid_flags(sweep, o);
  sweep->add_option("--q-list", o.q_list, "q values: 'a..b' or 'a,b,c'");
  sweep->add_option("--format", o.format, "pgm, csv or raw-rational")->capture_default_str();
  sweep->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  sweep->add_option("--prefix", o.prefix, "File name prefix")->capture_default_str();
  sweep->add_option("--csv-digits", o.csv_digits, "Decimal digits in CSV output")
      ->capture_default_str();

  auto* check = app.add_subcommand("check", "Run a verifier suite");
  check->add_option("suite", o.suite,
                    "decomposition, self-affinity, coarse-limit, mixed-radix or roundtrip")
      ->required();
  check->add_option("--p", o.op.p, "Fix the radix (random per trial otherwise)");
  check->add_option("--op", o.op.literal, "Operator literal N:R:p");
  check->add_option("--trials", o.trials, "Number of trials");
  check->add_option("--qmax", o.q_max, "Largest q for coarse-limit")->capture_default_str();
  check->add_option("--frac", o.grid.frac, "Fractional digits of random operands")
      ->capture_default_str();
  check->add_option("--seed", o.seed, "Random seed")->capture_default_str();

  auto* reproduce = app.add_subcommand("reproduce", "Write the figure recipes as PGM files");
  reproduce->add_option("figure", o.figure, "fig1, fig3, fig4, fig5, fig6 or all")
      ->capture_default_str();
  reproduce->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  reproduce->add_option("--res", o.reproduce_res, "Override samples per side");
  reproduce->add_option("--frac", o.grid.frac, "Fractional radix-p digits per coordinate")
      ->capture_default_str();
  reproduce->add_option("--threads", o.grid.threads, "Worker threads (0 = all cores)");

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!o.config.empty()) {
      try {
        apply_config(load_config(o.config), active);
      } catch (const CLI::ParseError& e) {
        throw FlagError("--config", e.what());
      }
    }
    const std::string name = active->get_name();
    if (name == "eval") return cmd_eval(o, out);
    if (name == "surface") return cmd_surface(o, out);
    if (name == "sweep") return cmd_sweep(o, out);
    if (name == "check") return cmd_check(o, out);
    return cmd_reproduce(o, out);
  } catch (const FlagError& e) {
    err << "error: " << e.what() << '\n';
    return e.status();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace patchwork
