#include "raise/core/types.hpp"

#include <algorithm>
#include <cctype>

#include "raise/core/errors.hpp"

namespace raise::core {

bool is_edit_kind(CandidateKind k) {
    return k == CandidateKind::kEditTop || k == CandidateKind::kEditRandom || k == CandidateKind::kEditComp;
}

const char* to_string(CandidateKind k) {
    switch (k) {
        case CandidateKind::kResample: return "resample";
        case CandidateKind::kRewrite: return "rewrite";
        case CandidateKind::kEditTop: return "edit_top";
        case CandidateKind::kEditRandom: return "edit_random";
        case CandidateKind::kEditComp: return "edit_comp";
    }
    return "resample";
}

std::optional<CandidateKind> candidate_kind_from_string(const std::string& s) {
    if (s == "resample") return CandidateKind::kResample;
    if (s == "rewrite") return CandidateKind::kRewrite;
    if (s == "edit_top") return CandidateKind::kEditTop;
    if (s == "edit_random") return CandidateKind::kEditRandom;
    if (s == "edit_comp") return CandidateKind::kEditComp;
    return std::nullopt;
}

const char* to_string(TerminationKind k) {
    switch (k) {
        case TerminationKind::kAnalyzerEnd: return "analyzer_end";
        case TerminationKind::kVerifierAllSatisfied: return "verifier_all_satisfied";
        case TerminationKind::kMaxRounds: return "max_rounds";
        case TerminationKind::kError: return "error";
    }
    return "error";
}

std::optional<TerminationKind> termination_kind_from_string(const std::string& s) {
    if (s == "analyzer_end") return TerminationKind::kAnalyzerEnd;
    if (s == "verifier_all_satisfied") return TerminationKind::kVerifierAllSatisfied;
    if (s == "max_rounds") return TerminationKind::kMaxRounds;
    if (s == "error") return TerminationKind::kError;
    return std::nullopt;
}

namespace {

const char* kMajorKeywords[] = {
    "subject", "object",  "count",  "number",  "exactly", "attribute", "color",   "colour",
    "material", "size",   "action", "pose",    "spatial", "position",  "above",   "below",
    "left",     "right",  "top",    "under",   "behind",  "front",     "beside",  "between",
    "inside",   "next to", "text",  "word",    "letter",  "sign",      "writing", "appear",
};

const char* kMinorKeywords[] = {
    "lighting", "light",   "exposure", "shadow", "mood",    "atmosphere", "focus",
    "sharp",    "depth of field",      "framing", "composition", "camera", "angle", "style",
};

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_any(const std::string& haystack, const char* const* words, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (haystack.find(words[i]) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

bool classify_major(const std::string& requirement_text) {
    const std::string t = lowercase(requirement_text);
    if (contains_any(t, kMajorKeywords, std::size(kMajorKeywords))) return true;
    if (contains_any(t, kMinorKeywords, std::size(kMinorKeywords))) return false;
    return true;  // unknown categories count as major
}

const RequirementChecklist& validate_checklist(const RequirementChecklist& checklist, int round) {
    if (checklist.questions.size() != checklist.requirements.size()) {
        throw SchemaError("question/requirement count mismatch");
    }
    std::set<int> seen;
    for (std::size_t i = 0; i < checklist.requirements.size(); ++i) {
        const Requirement& r = checklist.requirements[i];
        if (r.text.empty()) throw SchemaError("requirement text is empty");
        if (!seen.insert(r.index).second) throw SchemaError("duplicate requirement index");
        const BinaryQuestion& q = checklist.questions[i];
        if (q.text.empty()) throw SchemaError("binary question text is empty");
        if (q.index != r.index) throw SchemaError("question index does not match its requirement");
    }
    for (int idx : checklist.satisfied) {
        if (!seen.count(idx)) throw SchemaError("satisfied index not in checklist");
        if (checklist.unsatisfied.count(idx)) throw SchemaError("satisfied and unsatisfied sets overlap");
    }
    for (int idx : checklist.unsatisfied) {
        if (!seen.count(idx)) throw SchemaError("unsatisfied index not in checklist");
    }
    if (checklist.satisfied.size() + checklist.unsatisfied.size() != checklist.requirements.size()) {
        throw SchemaError("satisfied/unsatisfied sets do not partition the checklist");
    }
    if (round == 1 && !checklist.satisfied.empty()) {
        throw SchemaError("round 1 checklist must treat all requirements as unsatisfied");
    }
    return checklist;
}

VerifierOutput enforce_verifier_consistency(VerifierOutput raw, bool* corrected) {
    bool conjunction = true;
    for (const VerificationTriplet& t : raw.triplets) {
        if (t.answer != Answer::kYes) {
            conjunction = false;
            break;
        }
    }
    if (corrected) *corrected = (raw.all_satisfied != conjunction);
    raw.all_satisfied = conjunction;
    return raw;
}

}  // namespace raise::core
