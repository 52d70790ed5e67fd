#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "chshq/boxes.hpp"
#include "chshq/errors.hpp"
#include "chshq/finite_field.hpp"
#include "chshq/fourier.hpp"
#include "chshq/game.hpp"
#include "chshq/hadamard_ic.hpp"
#include "chshq/incidence.hpp"
#include "chshq/random.hpp"
#include "chshq/rational.hpp"
#include "chshq/serialize.hpp"

namespace chshq::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ojson header(std::string_view command) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

ojson encodings(const std::vector<Elem>& table) {
  ojson out = ojson::array();
  for (const Elem e : table) out.push_back(e.value);
  return out;
}

ojson rational_array(const ErrorDist& d) {
  ojson out = ojson::array();
  for (const auto& p : d.pmf) out.push_back(to_string(p));
  return out;
}

// ---------------------------------------------------------------------------
// Rendering. CSV flattens nested objects into dotted column names and joins
// arrays with spaces (inner arrays with ':'). A top-level "rows" array yields
// one CSV line per row, with the remaining scalar fields repeated.

std::string cell(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) joined += ' ';
      if (v[i].is_array()) {
        for (std::size_t k = 0; k < v[i].size(); ++k) {
          if (k > 0) joined += ':';
          joined += cell(v[i][k]);
        }
      } else {
        joined += cell(v[i]);
      }
    }
    return joined;
  }
  return v.dump();
}

using Columns = std::vector<std::pair<std::string, std::string>>;

void flatten(const ojson& obj, const std::string& prefix, Columns& out) {
  for (const auto& [key, value] : obj.items()) {
    if (prefix.empty() && key == "rows") continue;
    if (value.is_object()) {
      flatten(value, prefix + key + ".", out);
    } else {
      out.emplace_back(prefix + key, cell(value));
    }
  }
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_csv_line(std::ostringstream& os, const Columns& cols, bool names) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i > 0) os << ',';
    os << csv_escape(names ? cols[i].first : cols[i].second);
  }
  os << '\n';
}

std::string render_csv(const ojson& doc) {
  Columns meta;
  flatten(doc, "", meta);
  std::ostringstream os;
  if (!doc.contains("rows")) {
    write_csv_line(os, meta, true);
    write_csv_line(os, meta, false);
    return os.str();
  }
  bool first = true;
  for (const auto& row : doc.at("rows")) {
    Columns cols;
    flatten(row, "", cols);
    cols.insert(cols.end(), meta.begin(), meta.end());
    if (first) write_csv_line(os, cols, true);
    write_csv_line(os, cols, false);
    first = false;
  }
  return os.str();
}

std::string render(const ojson& doc, const std::string& format) {
  if (format == "csv") return render_csv(doc);
  return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoFailure("cannot open '" + path.string() + "' for writing");
  file << text;
  if (!file) throw IoFailure("failed writing '" + path.string() + "'");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoFailure("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(file);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands. Each returns the document to emit.

struct Common {
  std::uint32_t p = 0;
  std::uint32_t s = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
};

ojson classical_value_doc(const FieldSpec& field, const ValueWithWitness& v) {
  ojson doc;
  doc["q"] = field.q();
  doc["wins"] = v.value.wins;
  doc["p_win"] = to_string(v.value.p_win);
  doc["bias"] = to_string(v.value.bias);
  doc["strategy"] = {{"f", encodings(v.strategy.f)}, {"g", encodings(v.strategy.g)}};
  return doc;
}

ojson cmd_classical_value(const Common& o, bool search, unsigned restarts, unsigned rounds) {
  const FieldSpec field = FieldSpec::create(o.p, o.s);
  ojson doc = header("classical-value");
  doc["method"] = search ? "search" : "exact";
  doc["p"] = o.p;
  doc["s"] = o.s;
  if (search) {
    doc["seed"] = o.seed;
    doc["restarts"] = restarts;
    doc.update(classical_value_doc(field, search_classical_value(field, o.seed, restarts, rounds)));
  } else {
    doc.update(classical_value_doc(field, exact_classical_value(field)));
  }
  return doc;
}

ojson config_doc(const FieldSpec& field, const Config& c) {
  ojson doc = ojson::parse(to_json(field, c).dump());
  doc["incidences"] = incidences(field, c);
  doc["legal"] = is_legal(field, c);
  return doc;
}

ojson cmd_construct(const Common& o, const std::string& kind, bool thin) {
  const FieldSpec field = FieldSpec::create(o.p, o.s);
  ojson doc = header("construct");
  doc["kind"] = kind;
  doc["p"] = o.p;
  doc["s"] = o.s;
  if (kind == "subfield") {
    doc.update(config_doc(field, subfield_construction(field)));
  } else if (kind == "grid") {
    doc.update(config_doc(field, grid_construction(field)));
    doc["formula"] = grid_incidence_formula(field.q());
  } else {
    const SubspaceConstruction sc = subspace_construction(field, o.seed, thin);
    doc["seed"] = o.seed;
    doc["thin"] = thin;
    doc.update(config_doc(field, sc.config));
    doc["dims"] = {{"a", sc.dim_a}, {"b", sc.dim_b}, {"c", sc.dim_c}};
    doc["unthinned_lines"] = sc.unthinned_lines;
    doc["unthinned_incidences"] = sc.unthinned_incidences;
  }
  return doc;
}

ojson cmd_incidences(const std::string& in) {
  const auto [field, c] = config_from_json(read_json(in));
  ojson doc = header("incidences");
  doc["q"] = field.q();
  doc["num_points"] = c.points.size();
  doc["num_lines"] = c.lines.size();
  doc["incidences"] = incidences(field, c);
  doc["legal"] = is_legal(field, c);
  doc["trivial_bound"] = trivial_incidence_bound(static_cast<double>(c.points.size()),
                                                 static_cast<double>(c.lines.size()));
  return doc;
}

ojson cmd_regularize(const Common& o, const std::string& in, bool downsample) {
  const auto [field, c] = config_from_json(read_json(in));
  const RegularizationResult r = random_projective_regularize(field, c, o.seed, downsample);
  if (!is_legal(field, r.config)) throw InvariantViolation("regularized configuration is not legal");
  const GameValue value = win_count(field, config_to_strategy(field, r.config));
  if (value.wins < r.stats.retained_incidences) {
    throw InvariantViolation("strategy from regularized configuration loses incidences");
  }
  ojson doc = header("regularize");
  doc["seed"] = o.seed;
  doc["downsample"] = downsample;
  doc.update(config_doc(field, r.config));
  doc["p_win"] = to_string(value.p_win);
  const RegularizationStats& st = r.stats;
  doc["stats"] = {{"input_points", st.input_points},
                  {"input_lines", st.input_lines},
                  {"input_incidences", st.input_incidences},
                  {"sampled_points", st.sampled_points},
                  {"sampled_lines", st.sampled_lines},
                  {"sampled_incidences", st.sampled_incidences},
                  {"transformed_incidences", st.transformed_incidences},
                  {"points_at_infinity", st.points_at_infinity},
                  {"lines_removed_infinity_or_vertical", st.lines_removed_infinity_or_vertical},
                  {"points_removed_same_vertical", st.points_removed_same_vertical},
                  {"lines_removed_same_slope", st.lines_removed_same_slope},
                  {"retained_points", st.retained_points},
                  {"retained_lines", st.retained_lines},
                  {"retained_incidences", st.retained_incidences}};
  return doc;
}

ojson cmd_box_compose(std::uint64_t q, const std::string& e_text, unsigned m) {
  const FieldSpec field = FieldSpec::of_order(q);
  const Rational bias = parse_rational(e_text);
  const RegularBox box(field.q(), bias);
  const ErrorDist pmf = compose_m(field, box, m);
  if (pmf != compose_closed_form(field.q(), bias, m)) {
    throw InvariantViolation("m-fold composition disagrees with the closed form");
  }
  const RegularBox composed = RegularBox::from_error(pmf);
  ojson doc = header("box compose");
  doc["q"] = field.q();
  doc["E"] = to_string(bias);
  doc["m"] = m;
  doc["bias"] = to_string(composed.bias());
  doc["p_win"] = to_string(composed.p_win());
  doc["pmf"] = rational_array(pmf);
  return doc;
}

ojson cmd_box_distribute(std::uint64_t q, const std::string& e_text) {
  const FieldSpec field = FieldSpec::of_order(q);
  const Rational bias = parse_rational(e_text);
  const RegularBox box(field.q(), bias);
  const ErrorDist pmf = distribute_error(field, box);
  const RegularBox out = RegularBox::from_error(pmf);
  if (out.bias() != bias * bias) throw InvariantViolation("distributed bias is not E^2");
  ojson doc = header("box distribute");
  doc["q"] = field.q();
  doc["E"] = to_string(bias);
  doc["bias"] = to_string(out.bias());
  doc["p_win"] = to_string(out.p_win());
  doc["pmf"] = rational_array(pmf);
  return doc;
}

ojson ic_rows(const IcSweep& sweep) {
  ojson rows = ojson::array();
  for (const IcRow& r : sweep.rows) {
    ojson row;
    row["m"] = r.m;
    row["|U_m|"] = r.subcode_size;
    row["per_index_MI"] = r.per_index_mi;
    row["total"] = r.total;
    row["verdict"] = to_string(sweep.verdict);
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson cmd_ic_sweep(const Common& o, const std::string& e_text, unsigned m_min, unsigned m_max) {
  const FieldSpec field = FieldSpec::create(o.p, o.s);
  const Rational bias = parse_rational(e_text);
  const IcSweep sweep = ic_dichotomy_experiment(field, bias, m_min, m_max);
  ojson doc = header("ic-sweep");
  doc["p"] = o.p;
  doc["s"] = o.s;
  doc["q"] = field.q();
  doc["E"] = to_string(bias);
  doc["rows"] = ic_rows(sweep);
  return doc;
}

struct VerifyOutcome {
  ojson doc;
  std::uint64_t violations = 0;
};

VerifyOutcome cmd_fourier_verify(const Common& o, unsigned n, unsigned trials) {
  if (n < 1) throw InvalidInput("--n must be at least 1");
  const FieldSpec field = FieldSpec::create(o.p, o.s);
  const Character chi = additive_character(field);
  const double bound = bilinear_bound(field.q());
  double max_value = 0.0;
  std::uint64_t violations = 0;
  for (unsigned t = 0; t < trials; ++t) {
    const VectorFamily fam = random_family(field.q(), n, derive_seed(o.seed, t));
    const double value = character_bilinear_sum(fam, chi);
    max_value = std::max(max_value, value);
    if (!verify_bound(fam, chi)) ++violations;
  }
  const double tight = character_bilinear_sum(fourier_tight_family(chi), chi);
  VerifyOutcome outcome;
  outcome.doc = header("fourier verify");
  outcome.doc["seed"] = o.seed;
  outcome.doc["p"] = o.p;
  outcome.doc["s"] = o.s;
  outcome.doc["q"] = field.q();
  outcome.doc["n"] = n;
  outcome.doc["trials"] = trials;
  outcome.doc["bound"] = bound;
  outcome.doc["max_value"] = max_value;
  outcome.doc["max_ratio"] = max_value / bound;
  outcome.doc["violations"] = violations;
  outcome.doc["tight_value"] = tight;
  outcome.violations = violations;
  return outcome;
}

ojson cmd_fourier_maximize(const Common& o, unsigned n, unsigned rounds) {
  if (n < 1) throw InvalidInput("--n must be at least 1");
  const FieldSpec field = FieldSpec::create(o.p, o.s);
  const MaximizeResult r = maximize_sum(additive_character(field), n, o.seed, rounds);
  const double bound = bilinear_bound(field.q());
  ojson doc = header("fourier maximize");
  doc["seed"] = o.seed;
  doc["p"] = o.p;
  doc["s"] = o.s;
  doc["q"] = field.q();
  doc["n"] = n;
  doc["rounds"] = rounds;
  doc["value"] = r.value;
  doc["bound"] = bound;
  doc["ratio"] = r.value / bound;
  return doc;
}

// ---------------------------------------------------------------------------
// Report tables.

ojson table_doc(std::string_view name, std::uint64_t seed, ojson rows) {
  ojson doc = header("report");
  doc["table"] = name;
  doc["seed"] = seed;
  doc["rows"] = std::move(rows);
  return doc;
}

ojson report_classical(std::uint64_t seed) {
  ojson rows = ojson::array();
  const auto add = [&rows](const FieldSpec& field, std::string_view method, const ValueWithWitness& v) {
    ojson row;
    row["q"] = field.q();
    row["method"] = method;
    row["wins"] = v.value.wins;
    row["p_win"] = to_string(v.value.p_win);
    row["bias"] = to_string(v.value.bias);
    row["f"] = encodings(v.strategy.f);
    row["g"] = encodings(v.strategy.g);
    rows.push_back(std::move(row));
  };
  for (const std::uint64_t q : {2, 3, 4, 5, 7, 8}) {
    const FieldSpec field = FieldSpec::of_order(q);
    add(field, "exact", exact_classical_value(field));
  }
  for (const std::uint64_t q : {9, 11, 13, 16}) {
    const FieldSpec field = FieldSpec::of_order(q);
    add(field, "search", search_classical_value(field, derive_seed(seed, q), 8));
  }
  return table_doc("classical_values", seed, std::move(rows));
}

ojson report_constructions(std::uint64_t seed) {
  ojson rows = ojson::array();
  const auto add = [&rows](std::string_view kind, const FieldSpec& field, const Config& c,
                           std::uint64_t expected) {
    ojson row;
    row["kind"] = kind;
    row["q"] = field.q();
    row["points"] = c.points.size();
    row["lines"] = c.lines.size();
    row["incidences"] = incidences(field, c);
    row["expected"] = expected;
    row["legal"] = is_legal(field, c);
    row["trivial_bound"] = trivial_incidence_bound(static_cast<double>(c.points.size()),
                                                   static_cast<double>(c.lines.size()));
    rows.push_back(std::move(row));
  };
  for (const std::uint64_t q : {4, 9, 16, 25}) {
    const FieldSpec field = FieldSpec::of_order(q);
    const auto root = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(q))));
    add("subfield", field, subfield_construction(field), q * root);
  }
  for (const std::uint64_t q : {101, 1009}) {
    const FieldSpec field = FieldSpec::of_order(q);
    add("grid", field, grid_construction(field), grid_incidence_formula(q));
  }
  const FieldSpec f243 = FieldSpec::of_order(243);
  const SubspaceConstruction full = subspace_construction(f243, seed, false);
  add("subspace", f243, full.config, full.unthinned_incidences);
  const SubspaceConstruction thinned = subspace_construction(f243, seed, true);
  add("subspace_thinned", f243, thinned.config, thinned.unthinned_incidences);
  return table_doc("constructions", seed, std::move(rows));
}

ojson report_tsirelson(std::uint64_t seed) {
  ojson rows = ojson::array();
  for (std::uint64_t q = 2; q <= 32; ++q) {
    std::uint32_t p = 0;
    for (std::uint32_t d = 2; d <= q; ++d) {
      if (q % d == 0) {
        p = d;
        break;
      }
    }
    std::uint64_t rest = q;
    while (rest % p == 0) rest /= p;
    if (rest != 1) continue;
    ojson row;
    row["q"] = q;
    row["tsirelson_bound"] = tsirelson_bound(q);
    row["bias_ceiling"] = implied_bias_ceiling(q);
    row["character_sum_bound"] = bilinear_bound(static_cast<std::uint32_t>(q));
    rows.push_back(std::move(row));
  }
  return table_doc("tsirelson", seed, std::move(rows));
}

ojson report_ic(std::uint64_t seed) {
  ojson rows = ojson::array();
  const std::vector<std::pair<std::uint64_t, std::string>> sweeps = {
      {2, "1/2"}, {2, "3/4"}, {3, "1/2"}, {3, "13/20"}, {5, "2/5"}, {5, "1/2"}};
  for (const auto& [q, e_text] : sweeps) {
    const FieldSpec field = FieldSpec::of_order(q);
    const Rational bias = parse_rational(e_text);
    const IcSweep sweep = ic_dichotomy_experiment(field, bias, 2, 8);
    for (auto& row : ic_rows(sweep)) {
      ojson full;
      full["q"] = q;
      full["E"] = to_string(bias);
      full.update(row);
      rows.push_back(std::move(full));
    }
  }
  return table_doc("ic_sweeps", seed, std::move(rows));
}

const std::vector<std::pair<std::string, std::function<ojson(std::uint64_t)>>>& report_tables() {
  static const std::vector<std::pair<std::string, std::function<ojson(std::uint64_t)>>> tables = {
      {"classical_values", report_classical},
      {"constructions", report_constructions},
      {"tsirelson", report_tsirelson},
      {"ic_sweeps", report_ic},
  };
  return tables;
}

void cmd_report(const Common& o, bool all, const std::vector<std::string>& only, std::ostream& out) {
  if (!all && only.empty()) throw InvalidInput("report needs --all or at least one --table");
  if (o.out.empty()) throw InvalidInput("report needs --out DIR");
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw IoFailure("cannot create '" + o.out + "': " + ec.message());
  for (const auto& name : only) {
    const auto& tables = report_tables();
    if (std::none_of(tables.begin(), tables.end(), [&](const auto& t) { return t.first == name; })) {
      throw InvalidInput("unknown table '" + name + "'");
    }
  }
  for (const auto& [name, build] : report_tables()) {
    if (!all && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const std::filesystem::path path = std::filesystem::path(o.out) / (name + "." + o.format);
    write_file(path, render(build(o.seed), o.format));
    out << path.string() << "\n";
  }
}

// ---------------------------------------------------------------------------

void add_field_options(CLI::App* cmd, Common& o) {
  cmd->add_option("--p", o.p, "field characteristic")->required();
  cmd->add_option("--s", o.s, "extension degree")->capture_default_str();
}

void add_output_options(CLI::App* cmd, Common& o) {
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const ojson& doc, const Common& o, std::ostream& out) {
  const std::string text = render(doc, o.format);
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CHSH_q toolkit: classical values, incidence constructions, boxes, IC sweeps, "
               "character sums"};
  app.name("chshq");
  app.require_subcommand(1);

  Common o;
  bool exact = false;
  bool search = false;
  unsigned restarts = 16;
  unsigned rounds = 1000;
  std::string kind;
  bool no_thin = false;
  std::string in;
  bool no_downsample = false;
  std::uint64_t q = 0;
  std::string e_text;
  unsigned m = 1;
  unsigned m_min = 2;
  unsigned m_max = 0;
  unsigned n = 1;
  unsigned trials = 100;
  unsigned fourier_rounds = 50;
  bool all = false;
  std::vector<std::string> tables;

  auto* classical = app.add_subcommand("classical-value", "classical value of CHSH_q");
  add_field_options(classical, o);
  add_output_options(classical, o);
  auto* exact_flag = classical->add_flag("--exact", exact, "exhaustive search (q <= 8)");
  classical->add_flag("--search", search, "randomized local search")->excludes(exact_flag);
  classical->add_option("--seed", o.seed)->capture_default_str();
  classical->add_option("--restarts", restarts)->capture_default_str();
  classical->add_option("--rounds", rounds, "local search round cap")->capture_default_str();

  auto* construct = app.add_subcommand("construct", "explicit point-line configurations");
  add_field_options(construct, o);
  add_output_options(construct, o);
  construct->add_option("--kind", kind)->required()->check(CLI::IsMember({"subfield", "grid", "subspace"}));
  construct->add_option("--seed", o.seed, "thinning seed (subspace)")->capture_default_str();
  construct->add_flag("--no-thin", no_thin, "keep every subspace line");

  auto* regularize_cmd = app.add_subcommand("regularize", "random projective regularization");
  add_output_options(regularize_cmd, o);
  regularize_cmd->add_option("--in", in, "config JSON")->required();
  regularize_cmd->add_option("--seed", o.seed)->capture_default_str();
  regularize_cmd->add_flag("--no-downsample", no_downsample, "skip the floor(q/2) downsampling");

  auto* incidences_cmd = app.add_subcommand("incidences", "count incidences of a config");
  add_output_options(incidences_cmd, o);
  incidences_cmd->add_option("--in", in, "config JSON")->required();

  auto* box = app.add_subcommand("box", "regular noisy boxes");
  box->require_subcommand(1);
  auto* compose = box->add_subcommand("compose", "m-fold composition");
  add_output_options(compose, o);
  compose->add_option("--q", q)->required();
  compose->add_option("--E", e_text, "bias as num/den")->required();
  compose->add_option("--m", m)->required();
  auto* distribute_cmd = box->add_subcommand("distribute", "distributed game box");
  add_output_options(distribute_cmd, o);
  distribute_cmd->add_option("--q", q)->required();
  distribute_cmd->add_option("--E", e_text, "bias as num/den")->required();

  auto* ic = app.add_subcommand("ic-sweep", "information-causality sum over m");
  add_field_options(ic, o);
  add_output_options(ic, o);
  ic->add_option("--E", e_text, "bias as num/den")->required();
  ic->add_option("--m-min", m_min)->capture_default_str();
  ic->add_option("--m-max", m_max)->required();

  auto* fourier = app.add_subcommand("fourier", "character-sum bound");
  fourier->require_subcommand(1);
  auto* verify = fourier->add_subcommand("verify", "random families against q^{3/2}");
  add_field_options(verify, o);
  add_output_options(verify, o);
  verify->add_option("--n", n, "vector dimension")->required();
  verify->add_option("--trials", trials)->capture_default_str();
  verify->add_option("--seed", o.seed)->capture_default_str();
  auto* maximize = fourier->add_subcommand("maximize", "alternating maximization");
  add_field_options(maximize, o);
  add_output_options(maximize, o);
  maximize->add_option("--n", n, "vector dimension")->required();
  maximize->add_option("--rounds", fourier_rounds)->capture_default_str();
  maximize->add_option("--seed", o.seed)->capture_default_str();

  auto* report = app.add_subcommand("report", "regenerate golden tables");
  report->add_flag("--all", all, "every table");
  report->add_option("--table", tables, "classical_values|constructions|tsirelson|ic_sweeps");
  report->add_option("--seed", o.seed)->capture_default_str();
  report->add_option("--out", o.out, "output directory")->required();
  report->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidInput;
  }

  try {
    if (o.format.empty()) o.format = (*ic || *report) ? "csv" : "json";
    if (*classical) {
      emit(cmd_classical_value(o, search, restarts, rounds), o, out);
    } else if (*construct) {
      emit(cmd_construct(o, kind, !no_thin), o, out);
    } else if (*regularize_cmd) {
      emit(cmd_regularize(o, in, !no_downsample), o, out);
    } else if (*incidences_cmd) {
      emit(cmd_incidences(in), o, out);
    } else if (*compose) {
      emit(cmd_box_compose(q, e_text, m), o, out);
    } else if (*distribute_cmd) {
      emit(cmd_box_distribute(q, e_text), o, out);
    } else if (*ic) {
      emit(cmd_ic_sweep(o, e_text, m_min, m_max), o, out);
    } else if (*verify) {
      const VerifyOutcome outcome = cmd_fourier_verify(o, n, trials);
      emit(outcome.doc, o, out);
      if (outcome.violations > 0) {
        err << "error: " << outcome.violations << " families exceed the q^{3/2} bound\n";
        return kInvariantViolation;
      }
    } else if (*maximize) {
      emit(cmd_fourier_maximize(o, n, fourier_rounds), o, out);
    } else if (*report) {
      cmd_report(o, all, tables, out);
    }
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kInvariantViolation;
  } catch (const IoFailure& e) {
    err << "i/o failure: " << e.what() << "\n";
    return kIoFailure;
  }
  return kOk;
}

}  // namespace chshq::cli
