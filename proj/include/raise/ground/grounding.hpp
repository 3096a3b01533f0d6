#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raise/core/image_store.hpp"
#include "raise/core/types.hpp"

namespace raise::ground {

/// Raw reply of the consolidated vision-tool backend (caption + detection +
/// depth in one response). mean_depth arrives as a number and is rounded
/// half-up to an integer during validation.
struct RawRegion {
    std::string label;
    std::array<int, 4> bbox{};
    double mean_depth = 0.0;
};

struct GroundingReply {
    std::string caption;
    int width = 0;
    int height = 0;
    std::vector<RawRegion> regions;
};

class GroundingBackend {
public:
    virtual ~GroundingBackend() = default;
    virtual GroundingReply ground(const core::Bytes& png) = 0;
};

struct AcquireResult {
    std::optional<core::GroundingEvidence> evidence;  // absent: tools off or backend failed
    std::vector<std::string> notes;                   // degradations (rejected regions, failures)
};

/// Fetches evidence for an image. Invalid regions are dropped with a note;
/// backend failure or disabled tools degrade to absent evidence. At most 32
/// regions are kept, ordered by bbox area descending (stable).
AcquireResult acquire_grounding(const core::ImageRef& image, const core::RunConfig& config,
                                GroundingBackend* backend, const core::ImageStore& store);

/// Normative, bit-exact text form the verifier receives:
///   detected_caption: <caption>
///   image_size: (<w>, <h>)
///   Region Label: <label>
///   Bounding Box: [x_min, y_min, x_max, y_max]
///   Average Depth: <d>
/// (three lines per region, lines joined by '\n', no trailing whitespace).
std::string serialize_evidence(const core::GroundingEvidence& evidence);

/// Strict inverse of serialize_evidence; throws core::SchemaError on any
/// deviation from the line grammar.
core::GroundingEvidence parse_evidence(const std::string& text);

}  // namespace raise::ground
