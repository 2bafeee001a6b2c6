#pragma once

// JSON forms of verdicts, certificates and run reports.

#include <string>

#include <json.hpp>

#include "bjortho/symmetry_lab.hpp"

namespace bjortho {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kReportSchema = "bjortho.report/1";
inline constexpr const char* kCertificateSchema = "bjortho.certificate/1";

using Json = nlohmann::ordered_json;

Json to_json(const Vec& v);
Json to_json(const LinearOperator& t);
Json to_json(const OrthoVerdict& v);
Json to_json(const NormAttainment& a);
Json to_json(const ConstructionTrace& trace);
Json to_json(const WitnessCertificate& c);
Json to_json(const Theorem25Result& r);
Json to_json(const Theorem26Result& r);
Json to_json(const TransferReport& r);
Json to_json(const IntroExampleReport& r);

Vec vec_from_json(const Json& j);
LinearOperator operator_from_json(const Json& j);
Decision decision_from_name(std::string_view name);
OrthoVerdict verdict_from_json(const Json& j);
/// Inverse of to_json for certificates. Throws ParseError on schema mismatch.
WitnessCertificate certificate_from_json(const Json& j);

/// Record for an error raised by a library call (with trace when present).
Json error_json(const Error& e);

}  // namespace bjortho
