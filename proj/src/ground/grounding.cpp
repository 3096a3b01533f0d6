#include "raise/ground/grounding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "raise/core/errors.hpp"

namespace raise::ground {

namespace {

constexpr std::size_t kMaxRegions = 32;

std::string sanitized(const std::string& s, bool* changed) {
    std::string out = s;
    for (char& c : out) {
        if (c == '\n' || c == '\r') {
            c = ' ';
            if (changed) *changed = true;
        }
    }
    return out;
}

long long area_of(const std::array<int, 4>& b) {
    return static_cast<long long>(b[2] - b[0]) * static_cast<long long>(b[3] - b[1]);
}

}  // namespace

AcquireResult acquire_grounding(const core::ImageRef& image, const core::RunConfig& config,
                                GroundingBackend* backend, const core::ImageStore& store) {
    AcquireResult result;
    if (!config.enable_grounding_tools) {
        result.notes.push_back("grounding tools disabled by configuration");
        return result;
    }
    if (!backend) {
        result.notes.push_back("no grounding backend configured");
        return result;
    }

    GroundingReply reply;
    try {
        reply = backend->ground(store.get(image.content_id));
    } catch (const std::exception& e) {
        result.notes.push_back(std::string("grounding backend failed: ") + e.what());
        return result;
    }

    if (reply.caption.empty()) {
        result.notes.push_back("grounding backend returned an empty caption");
        return result;
    }

    core::GroundingEvidence evidence;
    evidence.image_width = image.width;
    evidence.image_height = image.height;
    if (reply.width != image.width || reply.height != image.height) {
        result.notes.push_back("grounding reply image size disagrees with the stored image; using stored size");
    }
    bool sanitized_text = false;
    evidence.caption = sanitized(reply.caption, &sanitized_text);

    for (const RawRegion& raw : reply.regions) {
        const auto& b = raw.bbox;
        if (b[0] < 0 || b[1] < 0 || b[0] > b[2] || b[1] > b[3] || b[2] > evidence.image_width ||
            b[3] > evidence.image_height) {
            result.notes.push_back("region rejected: bbox outside the image bounds (" + raw.label + ")");
            continue;
        }
        const int depth = static_cast<int>(std::floor(raw.mean_depth + 0.5));  // round half-up
        if (depth < 0 || depth > 255) {
            result.notes.push_back("region rejected: mean depth outside [0, 255] (" + raw.label + ")");
            continue;
        }
        core::Region region;
        region.label = sanitized(raw.label, &sanitized_text);
        region.bbox = b;
        region.mean_depth = depth;
        evidence.regions.push_back(std::move(region));
    }
    if (sanitized_text) result.notes.push_back("line breaks in caption or labels replaced with spaces");

    std::stable_sort(evidence.regions.begin(), evidence.regions.end(),
                     [](const core::Region& a, const core::Region& b) { return area_of(a.bbox) > area_of(b.bbox); });
    if (evidence.regions.size() > kMaxRegions) {
        result.notes.push_back("region list truncated to 32 entries (largest areas kept)");
        evidence.regions.resize(kMaxRegions);
    }

    result.evidence = std::move(evidence);
    return result;
}

std::string serialize_evidence(const core::GroundingEvidence& evidence) {
    std::string out = "detected_caption: " + evidence.caption;
    out += "\nimage_size: (" + std::to_string(evidence.image_width) + ", " +
           std::to_string(evidence.image_height) + ")";
    for (const core::Region& r : evidence.regions) {
        out += "\nRegion Label: " + r.label;
        out += "\nBounding Box: [" + std::to_string(r.bbox[0]) + ", " + std::to_string(r.bbox[1]) + ", " +
               std::to_string(r.bbox[2]) + ", " + std::to_string(r.bbox[3]) + "]";
        out += "\nAverage Depth: " + std::to_string(r.mean_depth);
    }
    return out;
}

namespace {

struct LineReader {
    const std::string& text;
    std::size_t pos = 0;

    bool done() const { return pos > text.size(); }

    std::string next(const char* what) {
        if (pos > text.size()) throw core::SchemaError(std::string("evidence text ended before ") + what);
        const std::size_t nl = text.find('\n', pos);
        std::string line;
        if (nl == std::string::npos) {
            line = text.substr(pos);
            pos = text.size() + 1;
        } else {
            line = text.substr(pos, nl - pos);
            pos = nl + 1;
        }
        return line;
    }
};

std::string strip_prefix(const std::string& line, const std::string& prefix, const char* what) {
    if (line.rfind(prefix, 0) != 0) {
        throw core::SchemaError(std::string("evidence line is not a ") + what + " line: " + line);
    }
    return line.substr(prefix.size());
}

int parse_int(std::string_view s, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw core::SchemaError(std::string("evidence ") + what + " is not an integer: " + std::string(s));
    }
    return value;
}

}  // namespace

core::GroundingEvidence parse_evidence(const std::string& text) {
    LineReader reader{text};
    core::GroundingEvidence evidence;

    evidence.caption = strip_prefix(reader.next("the caption"), "detected_caption: ", "detected_caption");

    const std::string size_body = strip_prefix(reader.next("the image size"), "image_size: (", "image_size");
    const std::size_t comma = size_body.find(", ");
    if (comma == std::string::npos || size_body.empty() || size_body.back() != ')') {
        throw core::SchemaError("evidence image_size line is malformed");
    }
    evidence.image_width = parse_int(std::string_view(size_body).substr(0, comma), "image width");
    evidence.image_height =
        parse_int(std::string_view(size_body).substr(comma + 2, size_body.size() - comma - 3), "image height");
    if (evidence.image_width <= 0 || evidence.image_height <= 0) {
        throw core::SchemaError("evidence image size must be positive");
    }

    while (reader.pos <= text.size()) {
        core::Region region;
        region.label = strip_prefix(reader.next("a region label"), "Region Label: ", "Region Label");

        std::string bbox_body = strip_prefix(reader.next("a bounding box"), "Bounding Box: [", "Bounding Box");
        if (bbox_body.empty() || bbox_body.back() != ']') {
            throw core::SchemaError("evidence bounding box line is malformed");
        }
        bbox_body.pop_back();
        std::array<int, 4> coords{};
        std::size_t start = 0;
        for (int i = 0; i < 4; ++i) {
            std::size_t end = bbox_body.find(", ", start);
            if (i == 3) end = bbox_body.size();
            if (end == std::string::npos) throw core::SchemaError("evidence bounding box needs four coordinates");
            coords[static_cast<std::size_t>(i)] =
                parse_int(std::string_view(bbox_body).substr(start, end - start), "bbox coordinate");
            start = (i == 3) ? end : end + 2;
        }
        region.bbox = coords;
        if (coords[0] < 0 || coords[1] < 0 || coords[0] > coords[2] || coords[1] > coords[3] ||
            coords[2] > evidence.image_width || coords[3] > evidence.image_height) {
            throw core::SchemaError("evidence bounding box violates the image bounds");
        }

        region.mean_depth = parse_int(strip_prefix(reader.next("a depth"), "Average Depth: ", "Average Depth"),
                                      "average depth");
        if (region.mean_depth < 0 || region.mean_depth > 255) {
            throw core::SchemaError("evidence average depth must be within [0, 255]");
        }
        evidence.regions.push_back(std::move(region));
    }
    return evidence;
}

}  // namespace raise::ground
