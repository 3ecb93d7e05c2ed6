// Command-line surface: validate, decompose, dominate, norm, approximate,
// probe, gallery. Results go to stdout or --out files; diagnostics to stderr.
// Exit codes: 0 success, 1 mathematical validation failure, 2 I/O or usage.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qcspan/qcspan.hpp"

namespace {

using namespace qcspan;

constexpr const char* kGalleryPrefix = "gallery:";

bool is_gallery_ref(const std::string& ref) { return ref.rfind(kGalleryPrefix, 0) == 0; }

GridFunction load_grid_input(const std::string& ref, std::optional<int> mesh_n) {
  if (is_gallery_ref(ref)) return gallery_grid(ref.substr(8), mesh_n);
  return load_grid(ref);
}

ContinuousQC load_target_input(const std::string& ref) {
  if (is_gallery_ref(ref)) return gallery_target(ref.substr(8));
  GridFunction G = load_grid(ref);
  return extend(G, ref);
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_validate(const std::string& in, std::optional<int> mesh_n) {
  const GridFunction G = load_grid_input(in, mesh_n);
  const ValidationReport rep = validate(G);
  print_json(validation_to_json(rep));
  return rep.is_quasi_copula() ? 0 : 1;
}

int cmd_decompose(const std::string& in, const std::string& base_path,
                  std::optional<int> mesh_n) {
  const GridFunction G = load_grid_input(in, mesh_n);
  const AffinePair pair =
      base_path.empty() ? two_copula_split(G) : two_copula_split(G, load_grid(base_path));
  print_json(affine_pair_to_json(pair));
  return 0;
}

int cmd_dominate(const std::string& in, std::optional<int> mesh_n) {
  const GridFunction G = load_grid_input(in, mesh_n);
  print_json(domination_to_json(dominate(G)));
  return 0;
}

int cmd_norm(const std::string& in, std::optional<int> mesh_n) {
  const GridFunction G = load_grid_input(in, mesh_n);
  json j;
  j["norm"] = format_rational(minkowski_norm(G));
  if (validate(G).is_two_increasing) {
    // a copula is its own trivial witness; no canonical second component
    j["is_copula"] = true;
    j["s"] = "1";
    j["t"] = "0";
    j["A"] = grid_to_json(G);
  } else {
    const NormWitness w = minkowski_witness(G);
    j["is_copula"] = false;
    j["s"] = format_rational(w.s);
    j["t"] = format_rational(w.t);
    j["A"] = grid_to_json(w.A);
    j["B"] = grid_to_json(w.B);
  }
  print_json(j);
  return 0;
}

int cmd_approximate(const std::string& in, int stages, const std::string& out_dir) {
  const ContinuousQC target = load_target_input(in);
  const CopulaSeries series = expand(target, stages);

  json manifest;
  manifest["target"] = target.name();
  manifest["stages"] = stages;
  json head = json::array();
  {
    json a;
    a["role"] = "A1";
    a["gamma"] = format_decimal(to_double(series.alpha1()));
    head.push_back(a);
    json b;
    b["role"] = "B1";
    b["gamma"] = format_decimal(to_double(series.beta1()));
    head.push_back(b);
  }
  manifest["head"] = std::move(head);
  json terms = json::array();
  for (const SeriesTerm& t : series.terms) {
    json e;
    e["stage"] = t.stage;
    e["role"] = std::string(1, t.role);
    e["gamma"] = format_decimal(to_double(t.gamma));
    e["K_n"] = t.repetitions;
    terms.push_back(std::move(e));
  }
  manifest["terms"] = std::move(terms);
  write_json_atomic(out_dir + "/series_manifest.json", manifest);

  std::vector<std::vector<std::string>> rows;
  for (int p = 1; p <= stages; ++p) {
    const ErrorCertificate cert = error_certificate(target, series, p, 100);
    rows.push_back({std::to_string(p), format_decimal(cert.bound), format_decimal(cert.measured)});
  }
  emit_csv(out_dir + "/stage_errors.csv", {"stage", "bound", "measured_sup_error"}, rows);
  std::cerr << "wrote " << out_dir << "/series_manifest.json and stage_errors.csv\n";
  return 0;
}

int cmd_probe(const std::string& in, int depth, const std::string& family_name,
              const std::string& base_path, const std::string& out_dir) {
  const ContinuousQC target = load_target_input(in);
  MeshFamily family = MeshFamily::dyadic();
  if (family_name == "aligned") {
    if (!base_path.empty()) {
      family = MeshFamily::aligned(load_grid(base_path).mesh());
    } else if (target.has_alignment_hint()) {
      family = MeshFamily::aligned([target](int level) { return target.alignment_hint(level); });
    } else {
      family = MeshFamily::aligned(Mesh::equidistant(1));
    }
  } else if (family_name != "dyadic") {
    fail(Errc::InvalidArgument, "family must be dyadic or aligned");
  }

  const std::vector<AlphaEntry> alphas = alpha_sequence(target, family, depth);
  const SpanReport report = span_verdict(alphas);

  std::vector<std::vector<std::string>> rows;
  for (const AlphaEntry& e : alphas)
    rows.push_back({std::to_string(e.level), format_rational(e.max_gap),
                    format_rational(e.alpha), family.name()});
  emit_csv(out_dir + "/probe.csv", {"level", "max_gap", "alpha_n", "family"}, rows);
  write_json_atomic(out_dir + "/verdict.json", span_report_to_json(report, family.name()));
  std::cerr << "wrote " << out_dir << "/probe.csv and verdict.json\n";
  return 0;
}

int cmd_gallery_emit(const std::string& name, std::optional<int> mesh_n, bool as_mass,
                     const std::string& csv_path) {
  const GridFunction G = gallery_grid(name, mesh_n);
  print_json(grid_to_json(G, as_mass));
  if (!csv_path.empty()) {
    const MassMatrix mm = G.mass();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 0; j < mm.cells.rows(); ++j)
      for (std::size_t i = 0; i < mm.cells.cols(); ++i)
        rows.push_back({std::to_string(i), std::to_string(j),
                        format_rational(G.mesh().xs()[i]), format_rational(G.mesh().xs()[i + 1]),
                        format_rational(G.mesh().ys()[j]), format_rational(G.mesh().ys()[j + 1]),
                        format_rational(mm.cells(j, i))});
    emit_csv(csv_path, {"i", "j", "x_lo", "x_hi", "y_lo", "y_hi", "mass"}, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decompositions of quasi-copulas into copulas: exact grids, "
               "optimal mass domination, Minkowski norms, series approximation, "
               "span probing"};
  app.require_subcommand(1);

  std::string in, base_path, out_dir, family_name = "dyadic", gallery_name, csv_path,
              emit_as = "values";
  int stages = 8, depth = 6, mesh_flag = 0;

  auto add_mesh_flag = [&](CLI::App* sub) {
    sub->add_option("--mesh", mesh_flag,
                    "equidistant mesh size for closed-form gallery inputs");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check the discrete axioms of a grid");
  validate_cmd->add_option("input", in, "grid JSON path or gallery:<name>")->required();
  add_mesh_flag(validate_cmd);

  CLI::App* decompose_cmd =
      app.add_subcommand("decompose", "affine two-copula decomposition of a quasi-copula grid");
  decompose_cmd->add_option("input", in, "grid JSON path or gallery:<name>")->required();
  decompose_cmd->add_option("--base", base_path, "base copula grid JSON (default: product)");
  add_mesh_flag(decompose_cmd);

  CLI::App* dominate_cmd = app.add_subcommand(
      "dominate", "optimal mass domination: alpha, extremal copulas, completion witness");
  dominate_cmd->add_option("input", in, "grid JSON path or gallery:<name>")->required();
  add_mesh_flag(dominate_cmd);

  CLI::App* norm_cmd =
      app.add_subcommand("norm", "exact Minkowski norm of a quasi-copula grid, with witness");
  norm_cmd->add_option("input", in, "grid JSON path or gallery:<name>")->required();
  add_mesh_flag(norm_cmd);

  CLI::App* approx_cmd =
      app.add_subcommand("approximate", "stagewise copula series with error certificates");
  approx_cmd->add_option("input", in, "grid JSON path or gallery:<name>")->required();
  approx_cmd->add_option("--stages", stages, "number of stages")->required();
  approx_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI::App* probe_cmd =
      app.add_subcommand("probe", "span-membership probe over a mesh family");
  probe_cmd->add_option("input", in, "grid JSON path or gallery:<name>")->required();
  probe_cmd->add_option("--depth", depth, "number of levels")->required();
  probe_cmd->add_option("--family", family_name, "dyadic or aligned");
  probe_cmd->add_option("--base", base_path, "alignment base grid JSON");
  probe_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI::App* gallery_cmd = app.add_subcommand("gallery", "named example functions");
  CLI::App* gallery_list = gallery_cmd->add_subcommand("list", "list gallery names");
  CLI::App* gallery_emit = gallery_cmd->add_subcommand("emit", "emit a gallery grid as JSON");
  gallery_emit->add_option("name", gallery_name, "gallery name")->required();
  gallery_emit->add_option("--mesh", mesh_flag, "equidistant mesh size");
  gallery_emit->add_option("--as", emit_as, "values (default) or mass");
  gallery_emit->add_option("--csv", csv_path, "also write a cell-mass CSV here");
  gallery_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::optional<int> mesh_n =
      mesh_flag > 0 ? std::optional<int>(mesh_flag) : std::nullopt;

  try {
    if (*validate_cmd) return cmd_validate(in, mesh_n);
    if (*decompose_cmd) return cmd_decompose(in, base_path, mesh_n);
    if (*dominate_cmd) return cmd_dominate(in, mesh_n);
    if (*norm_cmd) return cmd_norm(in, mesh_n);
    if (*approx_cmd) return cmd_approximate(in, stages, out_dir);
    if (*probe_cmd) return cmd_probe(in, depth, family_name, base_path, out_dir);
    if (*gallery_list) {
      for (const std::string& n : gallery_names()) std::cout << n << "\n";
      return 0;
    }
    if (*gallery_emit)
      return cmd_gallery_emit(gallery_name, mesh_n, emit_as == "mass", csv_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_io_errc(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
