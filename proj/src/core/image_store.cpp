#include "raise/core/image_store.hpp"

#include "raise/core/errors.hpp"

namespace raise::core {

ImageRef ImageStore::put_png(Bytes png) {
    const auto dims = png_dimensions(png);
    if (!dims) throw BackendError("backend returned bytes that are not a PNG image");
    ImageRef ref;
    ref.content_id = to_hex(fnv1a64(png));
    ref.width = dims->first;
    ref.height = dims->second;
    ref.media_type = "image/png";
    std::lock_guard<std::mutex> lock(mutex_);
    blobs_.emplace(ref.content_id, std::move(png));
    return ref;
}

const Bytes& ImageStore::get(const std::string& content_id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = blobs_.find(content_id);
    if (it == blobs_.end()) throw BackendError("unknown image content id: " + content_id);
    return it->second;
}

bool ImageStore::contains(const std::string& content_id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    return blobs_.count(content_id) > 0;
}

std::size_t ImageStore::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return blobs_.size();
}

}  // namespace raise::core
