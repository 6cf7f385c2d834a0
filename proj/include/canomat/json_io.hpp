#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "canomat/canonical.hpp"
#include "canomat/identities.hpp"
#include "canomat/mc_verify.hpp"
#include "canomat/measure.hpp"
#include "canomat/moment_chain.hpp"
#include "canomat/sumrule.hpp"

namespace canomat {

using json = nlohmann::json;

inline constexpr const char* kSchemaMeasure = "urn:canomat:schema:matrix-measure:1";
inline constexpr const char* kSchemaStructured = "urn:canomat:schema:structured-measure:1";
inline constexpr const char* kSchemaRecursion = "urn:canomat:schema:recursion-chain:1";
inline constexpr const char* kSchemaCanonical = "urn:canomat:schema:canonical-chain:1";
inline constexpr const char* kSchemaIdentities = "urn:canomat:schema:identity-reports:1";
inline constexpr const char* kSchemaSumRule = "urn:canomat:schema:sumrule-report:1";
inline constexpr const char* kSchemaMcTest = "urn:canomat:schema:mc-test-report:1";

// Doubles are written as numbers; non-finite values as the strings "inf", "-inf", "nan".
json number_to_json(double x);
double number_from_json(const json& j);

// {"re": [[..]], "im": [[..]]}, row-major.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& re, const json& im);
CMatrix matrix_from_json(const json& j);

json measure_to_json(const MatrixMeasure& m);
MatrixMeasure measure_from_json(const json& j);

json chain_to_json(const RecursionChain& c);
RecursionChain chain_from_json(const json& j);

json canonical_to_json(const CanonicalChain& c);
// Rebuilt from the Hermitian canonical moments.
CanonicalChain canonical_from_json(const json& j);

json structured_to_json(const StructuredMeasure& s);
// Accepts "kappa1"/"kappa2" in the document unless overridden (pass NaN to use the file).
StructuredMeasure structured_from_json(const json& j, double kappa1, double kappa2);

json identity_reports_to_json(const std::vector<IdentityReport>& r);
json sumrule_to_json(const SumRuleReport& r);
json mc_report_to_json(const McTestReport& r);

json read_json_file(const std::string& path);
// Pretty-printed with 17 significant digits.
void write_json_file(const std::string& path, const json& j);

}  // namespace canomat
