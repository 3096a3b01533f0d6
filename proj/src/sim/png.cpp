#include "raise/sim/png.hpp"

#include <zlib.h>

#include <cstring>
#include <stdexcept>
#include <string>

namespace raise::sim {

namespace {

constexpr char kBitsKeyword[] = "raise-sim";  // tEXt keyword carrying the bits

void put_be32(core::Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void append_chunk(core::Bytes& out, const char type[4], const core::Bytes& data) {
    put_be32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + data.size()));
    put_be32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

core::Bytes encode_sim_png(int width, int height, const std::vector<bool>& bits) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("png dimensions must be positive");

    core::Bytes png = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

    core::Bytes ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(width));
    put_be32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // adaptive filtering
    ihdr.push_back(0);  // no interlace
    append_chunk(png, "IHDR", ihdr);

    core::Bytes text;
    text.insert(text.end(), kBitsKeyword, kBitsKeyword + sizeof(kBitsKeyword) - 1);
    text.push_back(0);
    for (bool b : bits) text.push_back(b ? '1' : '0');
    append_chunk(png, "tEXt", text);

    // scanlines: filter byte 0 + flat gray row
    const std::size_t raw_size = static_cast<std::size_t>(height) * (static_cast<std::size_t>(width) + 1);
    core::Bytes raw(raw_size, 0x80);
    for (int y = 0; y < height; ++y) {
        raw[static_cast<std::size_t>(y) * (static_cast<std::size_t>(width) + 1)] = 0;
    }
    uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
    core::Bytes idat(compressed_size);
    if (compress2(idat.data(), &compressed_size, raw.data(), static_cast<uLong>(raw.size()), Z_BEST_SPEED) !=
        Z_OK) {
        throw std::runtime_error("png deflate failed");
    }
    idat.resize(compressed_size);
    append_chunk(png, "IDAT", idat);

    append_chunk(png, "IEND", {});
    return png;
}

std::optional<std::vector<bool>> decode_sim_bits(const core::Bytes& png) {
    if (png.size() < 8) return std::nullopt;
    std::size_t pos = 8;
    while (pos + 12 <= png.size()) {
        const std::uint32_t length = (static_cast<std::uint32_t>(png[pos]) << 24) |
                                     (static_cast<std::uint32_t>(png[pos + 1]) << 16) |
                                     (static_cast<std::uint32_t>(png[pos + 2]) << 8) |
                                     static_cast<std::uint32_t>(png[pos + 3]);
        if (pos + 12 + length > png.size()) return std::nullopt;
        const char* type = reinterpret_cast<const char*>(png.data() + pos + 4);
        if (std::memcmp(type, "tEXt", 4) == 0) {
            const std::uint8_t* data = png.data() + pos + 8;
            const std::size_t keyword_len = sizeof(kBitsKeyword) - 1;
            if (length > keyword_len && std::memcmp(data, kBitsKeyword, keyword_len) == 0 &&
                data[keyword_len] == 0) {
                std::vector<bool> bits;
                bits.reserve(length - keyword_len - 1);
                for (std::size_t i = keyword_len + 1; i < length; ++i) {
                    if (data[i] != '0' && data[i] != '1') return std::nullopt;
                    bits.push_back(data[i] == '1');
                }
                return bits;
            }
        }
        if (std::memcmp(type, "IEND", 4) == 0) break;
        pos += 12 + length;
    }
    return std::nullopt;
}

}  // namespace raise::sim
