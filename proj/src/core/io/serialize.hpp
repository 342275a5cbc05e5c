#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "core/generator/generator.hpp"
#include "core/geometry/path.hpp"
#include "core/moduli/report.hpp"

namespace semiflow {

using Json = nlohmann::ordered_json;

const char* tool_version();

// RFC-4180 quoting: fields holding a comma, quote, or newline are wrapped
// in quotes with inner quotes doubled; everything else passes through.
std::string csv_field(const std::string& raw);

// One CSV row from already-formatted cells, '\n' terminated.
std::string csv_row(const std::vector<std::string>& cells);

// '#'-prefixed metadata block every CSV starts with: tool version plus the
// resolved scenario config on one compact line, so the file alone suffices
// to rerun the producing scenario.
std::string csv_meta_header(const Json& meta);

Json to_json(const SampleDescriptor& d);
Json to_json(const ModulusReport& r);
Json to_json(const InequalityReport& r);
Json to_json(const GeneratorEstimate& e);
Json to_json(const PathCertificate& c);

// Wraps a report payload into the standard output document shape.
Json report_document(const std::string& kind, const Json& meta, Json payload);

std::string modulus_csv(const ModulusReport& r, const Json& meta);
std::string inequality_csv(const InequalityReport& r, const Json& meta);
// Schedule times with the sup gap closed at each one; first row has no gap.
std::string generator_gaps_csv(const GeneratorEstimate& e, const Json& meta);
// Sample points beside the extracted field values, for plotting.
std::string generator_fvalues_csv(const GeneratorEstimate& e, const Json& meta);
// Polyline nodes, one row per node.
std::string polyline_csv(const std::vector<Vec>& nodes, const Json& meta);

// Errors: IoError. Binary mode, so the bytes written are the bytes given.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace semiflow
