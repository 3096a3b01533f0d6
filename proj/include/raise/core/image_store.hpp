#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "raise/core/types.hpp"
#include "raise/core/util.hpp"

namespace raise::core {

/// Content-addressed store for opaque image bytes. Thread-safe: execution
/// workers insert concurrently; everything else reads.
class ImageStore {
public:
    /// Stores PNG bytes and returns a reference with dimensions sniffed from
    /// the IHDR header. Throws BackendError when the bytes are not a PNG.
    ImageRef put_png(Bytes png);

    const Bytes& get(const std::string& content_id) const;
    bool contains(const std::string& content_id) const;
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, Bytes> blobs_;
};

}  // namespace raise::core
