#include "higgs/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "higgs/errors.hpp"
#include "json.hpp"

namespace higgs {

namespace {

using Json = nlohmann::ordered_json;

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError(where + ": complex number must be a [re, im] pair");
  const Complex z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw FormatError(where + ": non-finite entry");
  return z;
}

Json matrix_to_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw FormatError(where + ": matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  CMat m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.empty())
      throw FormatError(where + ": matrix row must be a nonempty array");
    if (r == 0) {
      cols = row.size();
      m = CMat(rows, cols);
    } else if (row.size() != cols) {
      throw FormatError(where + ": ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(row[c], where);
  }
  return m;
}

Json parse_root(const std::string& bytes) {
  try {
    return Json::parse(bytes);
  } catch (const std::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

void check_schema_tag(const Json& j) {
  if (j.contains("schema")) {
    if (!j["schema"].is_string() || j["schema"].get<std::string>() != kSchemaTag)
      throw FormatError("unsupported schema tag");
  }
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw FormatError(std::string("missing field '") + name + "'");
  return j[name];
}

Json spectrum_to_json(const JointSpectrum& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    Json tuple = Json::array();
    for (const auto& z : e.tuple) tuple.push_back(complex_to_json(z));
    entries.push_back(Json{{"tuple", std::move(tuple)}, {"mult", e.multiplicity}});
  }
  return entries;
}

JointSpectrum spectrum_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw FormatError(where + ": spectrum must be an array");
  JointSpectrum s;
  for (const auto& ej : j) {
    SpectrumEntry e;
    const Json& tj = field(ej, "tuple");
    if (!tj.is_array()) throw FormatError(where + ": tuple must be an array");
    for (const auto& zj : tj) e.tuple.push_back(complex_from_json(zj, where));
    const Json& mj = field(ej, "mult");
    if (!mj.is_number_integer() || mj.get<int>() < 1)
      throw FormatError(where + ": mult must be a positive integer");
    e.multiplicity = mj.get<int>();
    s.entries.push_back(std::move(e));
  }
  return s;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string serialize_datum(const HiggsDatum& datum) {
  Json j;
  j["schema"] = kSchemaTag;
  j["dim"] = datum.dim;
  Json blocks = Json::array();
  for (const auto& b : datum.blocks) {
    Json bj;
    bj["label"] = b.label;
    bj["rank"] = b.rank;
    bj["slope"] = b.slope;
    bj["multiplicity"] = b.multiplicity;
    Json higgs = Json::array();
    for (const auto& t : b.higgs) higgs.push_back(matrix_to_json(t));
    bj["higgs"] = std::move(higgs);
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  return dump(j);
}

HiggsDatum parse_datum(const std::string& bytes, const Tolerances& tol) {
  const Json j = parse_root(bytes);
  check_schema_tag(j);
  HiggsDatum datum;
  const Json& dj = field(j, "dim");
  if (!dj.is_number_integer()) throw FormatError("dim: must be an integer");
  datum.dim = dj.get<int>();
  const Json& bj = field(j, "blocks");
  if (!bj.is_array()) throw FormatError("blocks: must be an array");
  for (std::size_t k = 0; k < bj.size(); ++k) {
    const Json& one = bj[k];
    const std::string base = "blocks[" + std::to_string(k) + "]";
    BlockSpec b;
    const Json& lj = field(one, "label");
    if (!lj.is_string()) throw FormatError(base + ".label: must be a string");
    b.label = lj.get<std::string>();
    const Json& rj = field(one, "rank");
    if (!rj.is_number_integer()) throw FormatError(base + ".rank: must be an integer");
    b.rank = rj.get<int>();
    const Json& sj = field(one, "slope");
    if (!sj.is_number()) throw FormatError(base + ".slope: must be a number");
    b.slope = sj.get<double>();
    const Json& mj = field(one, "multiplicity");
    if (!mj.is_number_integer()) throw FormatError(base + ".multiplicity: must be an integer");
    b.multiplicity = mj.get<int>();
    const Json& hj = field(one, "higgs");
    if (!hj.is_array()) throw FormatError(base + ".higgs: must be an array of matrices");
    for (std::size_t i = 0; i < hj.size(); ++i)
      b.higgs.push_back(matrix_from_json(hj[i], base + ".higgs[" + std::to_string(i) + "]"));
    datum.blocks.push_back(std::move(b));
  }
  const ValidationReport report = validate(datum, tol);
  if (!report.ok()) throw FormatError("invalid datum\n" + report.to_string());
  return datum;
}

std::string serialize_truth(const PlantedTruth& truth,
                            const std::vector<std::string>& labels) {
  Json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "planted_truth";
  Json blocks = Json::array();
  for (std::size_t b = 0; b < truth.blocks.size(); ++b) {
    const auto& bt = truth.blocks[b];
    Json bj;
    bj["label"] = b < labels.size() ? labels[b] : ("E" + std::to_string(b));
    bj["spectrum"] = spectrum_to_json(bt.spectrum);
    bj["group_dims"] = bt.group_dims;
    bj["conjugator"] = matrix_to_json(bt.conjugator);
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  return dump(j);
}

PlantedTruth parse_truth(const std::string& bytes) {
  const Json j = parse_root(bytes);
  check_schema_tag(j);
  PlantedTruth truth;
  const Json& bj = field(j, "blocks");
  if (!bj.is_array()) throw FormatError("blocks: must be an array");
  for (std::size_t b = 0; b < bj.size(); ++b) {
    const std::string base = "blocks[" + std::to_string(b) + "]";
    PlantedBlockTruth bt;
    bt.spectrum = spectrum_from_json(field(bj[b], "spectrum"), base + ".spectrum");
    const Json& gj = field(bj[b], "group_dims");
    if (!gj.is_array()) throw FormatError(base + ".group_dims: must be an array");
    for (const auto& g : gj) bt.group_dims.push_back(g.get<int>());
    bt.conjugator = matrix_from_json(field(bj[b], "conjugator"), base + ".conjugator");
    truth.blocks.push_back(std::move(bt));
  }
  return truth;
}

namespace {

std::string serialize_block_matrices(const char* kind, const std::vector<CMat>& blocks) {
  Json j;
  j["schema"] = kSchemaTag;
  j["kind"] = kind;
  Json arr = Json::array();
  for (const auto& m : blocks) arr.push_back(matrix_to_json(m));
  j["blocks"] = std::move(arr);
  return dump(j);
}

std::vector<CMat> parse_block_matrices(const std::string& bytes) {
  const Json j = parse_root(bytes);
  check_schema_tag(j);
  const Json& bj = field(j, "blocks");
  if (!bj.is_array() || bj.empty())
    throw FormatError("blocks: must be a nonempty array of matrices");
  std::vector<CMat> out;
  for (std::size_t k = 0; k < bj.size(); ++k)
    out.push_back(matrix_from_json(bj[k], "blocks[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace

std::string serialize_metric(const MetricDatum& metric) {
  return serialize_block_matrices("metric", metric.blocks);
}

MetricDatum parse_metric(const std::string& bytes) {
  MetricDatum m;
  m.blocks = parse_block_matrices(bytes);
  for (std::size_t k = 0; k < m.blocks.size(); ++k)
    if (m.blocks[k].rows() != m.blocks[k].cols())
      throw FormatError("blocks[" + std::to_string(k) + "]: metric block must be square");
  return m;
}

std::string serialize_gauge(const GaugeTransform& gauge) {
  return serialize_block_matrices("gauge", gauge.blocks);
}

GaugeTransform parse_gauge(const std::string& bytes) {
  GaugeTransform g;
  g.blocks = parse_block_matrices(bytes);
  for (std::size_t k = 0; k < g.blocks.size(); ++k)
    if (g.blocks[k].rows() != g.blocks[k].cols())
      throw FormatError("blocks[" + std::to_string(k) + "]: gauge block must be square");
  return g;
}

std::string serialize_trivialization(const ChangeOfTrivialization& change) {
  Json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "trivialization";
  j["matrix"] = matrix_to_json(change.matrix);
  return dump(j);
}

ChangeOfTrivialization parse_trivialization(const std::string& bytes) {
  const Json j = parse_root(bytes);
  check_schema_tag(j);
  ChangeOfTrivialization c{matrix_from_json(field(j, "matrix"), "matrix")};
  if (c.matrix.rows() != c.matrix.cols())
    throw FormatError("matrix: trivialization change must be square");
  return c;
}

std::string polystability_report_json(const PolystabilityReport& report) {
  Json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "polystability_report";
  j["verdict"] = to_string(report.verdict);
  j["commutation_residual"] = report.commutation_residual;
  j["scale"] = report.scale;
  Json blocks = Json::array();
  for (const auto& b : report.blocks) {
    Json bj;
    bj["label"] = b.label;
    bj["commutation_residual"] = b.commutation_residual;
    bj["scale"] = b.scale;
    bj["semisimple"] = b.semisimple;
    bj["semisimple_defect"] = b.semisimple_defect;
    if (b.spectrum) bj["spectrum"] = spectrum_to_json(*b.spectrum);
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  return dump(j);
}

std::string ym_report_json(const YMReport& report) {
  Json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "ym_report";
  j["ym_residual"] = report.ym_residual;
  j["flatness_residual"] = report.flatness_residual;
  j["einstein_constant_theta"] = report.einstein_constant_theta;
  j["eh_verdict"] = report.eh_verdict;
  j["scale"] = report.scale;
  Json blocks = Json::array();
  for (const auto& b : report.blocks) {
    blocks.push_back(Json{{"label", b.label},
                          {"ym_residual", b.ym_residual},
                          {"flatness_residual", b.flatness_residual},
                          {"scale", b.scale}});
  }
  j["blocks"] = std::move(blocks);
  return dump(j);
}

std::string flow_result_json(const FlowResult& result, int history_stride) {
  Json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "flow_result";
  j["verdict"] = to_string(result.verdict);
  j["steps"] = result.steps;
  j["final_residual"] = result.final_residual;
  j["max_condition"] = result.max_condition;
  j["scale"] = result.scale;
  Json hist = Json::array();
  const int stride = std::max(1, history_stride);
  for (std::size_t i = 0; i < result.residual_history.size(); ++i)
    if (i % stride == 0 || i + 1 == result.residual_history.size())
      hist.push_back(result.residual_history[i]);
  j["residual_history"] = std::move(hist);
  Json blocks = Json::array();
  for (const auto& m : result.metric.blocks) blocks.push_back(matrix_to_json(m));
  j["metric"] = Json{{"blocks", std::move(blocks)}};
  return dump(j);
}

std::string centralizer_report_json(const std::vector<std::string>& labels,
                                    const std::vector<CentralizerResult>& results) {
  Json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "centralizer_report";
  Json blocks = Json::array();
  for (std::size_t b = 0; b < results.size(); ++b) {
    Json bj;
    bj["label"] = b < labels.size() ? labels[b] : std::to_string(b);
    bj["dim"] = results[b].dim;
    if (results[b].levi_type) bj["levi_type"] = *results[b].levi_type;
    Json basis = Json::array();
    for (const auto& x : results[b].basis) basis.push_back(matrix_to_json(x));
    bj["basis"] = std::move(basis);
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  return dump(j);
}

std::string spectrum_report_json(const std::vector<std::string>& labels,
                                 const std::vector<JointSpectrum>& spectra) {
  Json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "spectrum_report";
  Json blocks = Json::array();
  for (std::size_t b = 0; b < spectra.size(); ++b) {
    Json bj;
    bj["label"] = b < labels.size() ? labels[b] : std::to_string(b);
    bj["spectrum"] = spectrum_to_json(spectra[b]);
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  return dump(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write file: " + path);
  out << bytes;
}

}  // namespace higgs
