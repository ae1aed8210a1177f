#pragma once

#include <string>

#include "summatau/io.hpp"
#include "summatau/oscillation.hpp"
#include "summatau/probes.hpp"
#include "summatau/verdict.hpp"

namespace summatau {

/// Version stamped into every JSON document as "schema_version"; the
/// corresponding JSON Schema files ship under schema/.
constexpr int kSchemaVersion = 1;

/// {"schema_version":1,"schema":"verdict","method":...,"spec":...,
///  "status":...,  then status-specific fields, "diagnostics":[...]}
std::string verdict_json(const Verdict& v, const std::string& method, const std::string& spec_text);

/// Bare verdict object (no envelope); reused inside probe rows.
void write_verdict_object(JsonWriter& w, const Verdict& v);

/// {"schema_version":1,"schema":"probe_report","function":...,
///  "battery_version":...,"rows":[{"spec","input_verdict","image_verdict",
///  "f_of_limit","match"}...],"conclusion":...,"witness_index":...}
std::string probe_report_json(const ProbeReport& report);

/// {"schema_version":1,"schema":"oscillation_report","spec":...,
///  "classification":...,"lambda_grid":[...],"tail_sups":[...],
///  "threshold":...,"witness":{...}|null,"diagnostics":[...]}
std::string oscillation_report_json(const SoReport& report, const std::string& spec_text);

/// {"schema_version":1,"schema":"ordinary_report",...}
std::string ordinary_report_json(const OrdinaryReport& report, const std::string& function_text);

} // namespace summatau
