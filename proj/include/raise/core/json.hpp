#pragma once

// Canonical JSON form of every domain type: snake_case field names matching
// the type definitions. This form appears in traces and the run store.

#include <nlohmann/json.hpp>

#include "raise/core/types.hpp"

namespace raise::core {

using Json = nlohmann::json;

void to_json(Json& j, const ImageRef& v);
void from_json(const Json& j, ImageRef& v);

void to_json(Json& j, const Requirement& v);
void from_json(const Json& j, Requirement& v);

void to_json(Json& j, const BinaryQuestion& v);
void from_json(const Json& j, BinaryQuestion& v);

void to_json(Json& j, const RequirementChecklist& v);
void from_json(const Json& j, RequirementChecklist& v);

void to_json(Json& j, const AnalyzerOutput& v);
void from_json(const Json& j, AnalyzerOutput& v);

void to_json(Json& j, const GenRewriteOutput& v);
void from_json(const Json& j, GenRewriteOutput& v);

void to_json(Json& j, const EditRewriteOutput& v);
void from_json(const Json& j, EditRewriteOutput& v);

void to_json(Json& j, const CandidateId& v);
void from_json(const Json& j, CandidateId& v);

void to_json(Json& j, const Candidate& v);
void from_json(const Json& j, Candidate& v);

void to_json(Json& j, const ScoredCandidate& v);
void from_json(const Json& j, ScoredCandidate& v);

void to_json(Json& j, const Region& v);
void from_json(const Json& j, Region& v);

void to_json(Json& j, const GroundingEvidence& v);
void from_json(const Json& j, GroundingEvidence& v);

void to_json(Json& j, const VerificationTriplet& v);
void from_json(const Json& j, VerificationTriplet& v);

void to_json(Json& j, const VerifierOutput& v);
void from_json(const Json& j, VerifierOutput& v);

void to_json(Json& j, const RoundRecord& v);
void from_json(const Json& j, RoundRecord& v);

void to_json(Json& j, const TerminationReason& v);
void from_json(const Json& j, TerminationReason& v);

void to_json(Json& j, const RunConfig& v);
void from_json(const Json& j, RunConfig& v);

void to_json(Json& j, const RunState& v);
void from_json(const Json& j, RunState& v);

}  // namespace raise::core
