#include "summatau/reports.hpp"

#include "summatau/dsl.hpp"
#include "summatau/io.hpp"

namespace summatau {

namespace {

// status-specific fields plus diagnostics, into an already-open object
void write_verdict_fields(JsonWriter& w, const Verdict& v) {
    w.field("status", to_string(v.status));
    switch (v.status) {
    case VerdictStatus::Converged:
        w.field("limit", v.limit);
        w.field("err", v.err);
        break;
    case VerdictStatus::Diverged:
        w.field("sign", v.sign);
        break;
    case VerdictStatus::Oscillating:
        w.field("band_lo", v.band_lo);
        w.field("band_hi", v.band_hi);
        break;
    case VerdictStatus::Inconclusive:
        break;
    }
    w.key("diagnostics").begin_array();
    for (const auto& d : v.diagnostics) w.value(d);
    w.end_array();
}

} // namespace

void write_verdict_object(JsonWriter& w, const Verdict& v) {
    w.begin_object();
    write_verdict_fields(w, v);
    w.end_object();
}

std::string verdict_json(const Verdict& v, const std::string& method, const std::string& spec_text) {
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", kSchemaVersion);
    w.field("schema", "verdict");
    w.field("method", method);
    w.field("spec", spec_text);
    write_verdict_fields(w, v);
    w.end_object();
    return w.str();
}

std::string probe_report_json(const ProbeReport& report) {
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", kSchemaVersion);
    w.field("schema", "probe_report");
    w.field("function", report.function.render());
    w.field("battery_version", report.battery_version);
    w.key("rows").begin_array();
    for (const auto& row : report.rows) {
        w.begin_object();
        w.field("spec", render_spec(row.spec));
        w.key("input_verdict");
        write_verdict_object(w, row.input_verdict);
        w.key("image_verdict");
        if (row.image_verdict)
            write_verdict_object(w, *row.image_verdict);
        else
            w.null();
        w.key("f_of_limit");
        if (row.f_of_limit)
            w.value(*row.f_of_limit);
        else
            w.null();
        w.field("match", to_string(row.match));
        w.end_object();
    }
    w.end_array();
    w.field("conclusion", to_string(report.conclusion));
    w.key("witness_index");
    if (report.witness_index)
        w.value(static_cast<std::uint64_t>(*report.witness_index));
    else
        w.null();
    w.end_object();
    return w.str();
}

std::string oscillation_report_json(const SoReport& report, const std::string& spec_text) {
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", kSchemaVersion);
    w.field("schema", "oscillation_report");
    w.field("spec", spec_text);
    w.field("classification", to_string(report.classification));
    w.key("lambda_grid").begin_array();
    for (double l : report.lambda_grid) w.value(l);
    w.end_array();
    w.key("tail_sups").begin_array();
    for (double s : report.tail_sups) w.value(s);
    w.end_array();
    w.field("threshold", report.threshold);
    w.key("witness");
    if (report.witness) {
        w.begin_object();
        w.field("n", report.witness->n);
        w.field("k", report.witness->k);
        w.field("gap", report.witness->gap);
        w.end_object();
    } else {
        w.null();
    }
    w.key("diagnostics").begin_array();
    for (const auto& d : report.diagnostics) w.value(d);
    w.end_array();
    w.end_object();
    return w.str();
}

std::string ordinary_report_json(const OrdinaryReport& report, const std::string& function_text) {
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", kSchemaVersion);
    w.field("schema", "ordinary_report");
    w.field("function", function_text);
    w.field("point", report.point);
    w.field("classification", to_string(report.classification));
    w.field("worst_gap", report.worst_gap);
    if (!report.note.empty()) w.field("note", report.note);
    w.end_object();
    return w.str();
}

} // namespace summatau
