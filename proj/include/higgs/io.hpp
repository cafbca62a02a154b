#pragma once

#include <string>

#include "higgs/levi.hpp"
#include "higgs/model.hpp"
#include "higgs/polystability.hpp"
#include "higgs/yang_mills.hpp"

namespace higgs {

inline constexpr const char* kSchemaTag = "higgs-torus/1";

// Serialization is UTF-8 JSON; complex numbers are [re, im] pairs, matrices
// arrays of rows. Numbers round-trip bit-exactly. parse_* throws FormatError
// on malformed syntax or invariant violations.

std::string serialize_datum(const HiggsDatum& datum);
HiggsDatum parse_datum(const std::string& bytes, const Tolerances& tol = {});

std::string serialize_truth(const PlantedTruth& truth,
                            const std::vector<std::string>& labels);
PlantedTruth parse_truth(const std::string& bytes);

std::string serialize_metric(const MetricDatum& metric);
MetricDatum parse_metric(const std::string& bytes);

std::string serialize_gauge(const GaugeTransform& gauge);
GaugeTransform parse_gauge(const std::string& bytes);

std::string serialize_trivialization(const ChangeOfTrivialization& change);
ChangeOfTrivialization parse_trivialization(const std::string& bytes);

std::string polystability_report_json(const PolystabilityReport& report);
std::string ym_report_json(const YMReport& report);
std::string flow_result_json(const FlowResult& result, int history_stride = 1);
std::string centralizer_report_json(const std::vector<std::string>& labels,
                                    const std::vector<CentralizerResult>& results);
std::string spectrum_report_json(const std::vector<std::string>& labels,
                                 const std::vector<JointSpectrum>& spectra);

std::string read_file(const std::string& path);              // FormatError if unreadable
void write_file(const std::string& path, const std::string& bytes);

}  // namespace higgs
