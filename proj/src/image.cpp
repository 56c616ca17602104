// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <bsrt/image.h>

#include <zlib.h>

#include <bsrt/errors.h>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace bsrt {

static_assert(sizeof(float) == 4, "PFM I/O assumes 32-bit floats");

void WritePfm(const std::string &path, const Image &image) {
    if (image.channels != 1 && image.channels != 3)
        throw IoError("PFM supports 1 or 3 channels, got " +
                      std::to_string(image.channels));
    if (image.width <= 0 || image.height <= 0)
        throw IoError("PFM write: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open \"" + path + "\" for writing");
    out << (image.channels == 1 ? "Pf" : "PF") << '\n'
        << image.width << ' ' << image.height << '\n'
        << "-1.0" << '\n';
    // PFM stores scanlines bottom-to-top; flip on write (and again on read)
    // so the in-memory layout round-trips bit-exactly.
    size_t rowFloats = size_t(image.width) * image.channels;
    for (int y = image.height - 1; y >= 0; --y)
        out.write(reinterpret_cast<const char *>(&image.pixels[y * rowFloats]),
                  std::streamsize(rowFloats * sizeof(float)));
    if (!out) throw IoError("short write to \"" + path + "\"");
}

static std::string NextPfmToken(std::istream &in) {
    // Whitespace-delimited token; PFM headers permit comments starting '#'.
    std::string tok;
    while (in >> tok) {
        if (tok[0] != '#') return tok;
        std::string rest;
        std::getline(in, rest);
    }
    throw IoError("truncated PFM header");
}

Image ReadPfm(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open \"" + path + "\" for reading");
    std::string magic = NextPfmToken(in);
    int channels;
    if (magic == "Pf")
        channels = 1;
    else if (magic == "PF")
        channels = 3;
    else
        throw IoError("\"" + path + "\" is not a PFM file");
    int width = std::stoi(NextPfmToken(in));
    int height = std::stoi(NextPfmToken(in));
    double scale = std::stod(NextPfmToken(in));
    if (width <= 0 || height <= 0)
        throw IoError("invalid PFM dimensions in \"" + path + "\"");
    if (scale >= 0)
        throw IoError("big-endian PFM not supported: \"" + path + "\"");
    in.get();  // single whitespace byte terminating the header
    Image image(width, height, channels);
    size_t rowFloats = size_t(width) * channels;
    for (int y = height - 1; y >= 0; --y)
        in.read(reinterpret_cast<char *>(&image.pixels[y * rowFloats]),
                std::streamsize(rowFloats * sizeof(float)));
    if (!in) throw IoError("truncated PFM payload in \"" + path + "\"");
    return image;
}

// --- PNG encoding (zlib for both the IDAT deflate stream and CRC-32) ---

static void PngPut32(std::string &s, uint32_t v) {
    s.push_back(char(v >> 24));
    s.push_back(char(v >> 16));
    s.push_back(char(v >> 8));
    s.push_back(char(v));
}

static void PngChunk(std::ofstream &out, const char type[4],
                     const std::string &payload) {
    std::string buf;
    PngPut32(buf, uint32_t(payload.size()));
    buf.append(type, 4);
    buf += payload;
    uint32_t crc = uint32_t(
        crc32(crc32(0L, Z_NULL, 0),
              reinterpret_cast<const Bytef *>(buf.data() + 4), uInt(buf.size() - 4)));
    PngPut32(buf, crc);
    out.write(buf.data(), std::streamsize(buf.size()));
}

void WritePng(const std::string &path, const Image &image, float exposure,
              float gamma) {
    if (image.channels != 1 && image.channels != 3)
        throw IoError("PNG supports 1 or 3 channels, got " +
                      std::to_string(image.channels));
    if (image.width <= 0 || image.height <= 0)
        throw IoError("PNG write: empty image");
    if (!(gamma > 0)) throw IoError("PNG write: gamma must be positive");

    // Tone map to 8 bits: clamp(v * exposure)^(1/gamma).
    float invGamma = 1.f / gamma;
    std::string raw;
    raw.reserve(size_t(image.height) * (1 + size_t(image.width) * image.channels));
    for (int y = 0; y < image.height; ++y) {
        raw.push_back('\0');  // per-scanline filter byte: none
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < image.channels; ++c) {
                float v = image.At(x, y, c) * exposure;
                v = std::pow(Clamp(v, 0.f, 1.f), invGamma);
                raw.push_back(char(uint8_t(std::lround(v * 255.f))));
            }
    }

    uLongf zcap = compressBound(uLong(raw.size()));
    std::string zbuf(zcap, '\0');
    if (compress2(reinterpret_cast<Bytef *>(zbuf.data()), &zcap,
                  reinterpret_cast<const Bytef *>(raw.data()), uLong(raw.size()),
                  Z_BEST_COMPRESSION) != Z_OK)
        throw IoError("zlib compression failed for \"" + path + "\"");
    zbuf.resize(zcap);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open \"" + path + "\" for writing");
    static const uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    out.write(reinterpret_cast<const char *>(kSig), 8);
    std::string ihdr;
    PngPut32(ihdr, uint32_t(image.width));
    PngPut32(ihdr, uint32_t(image.height));
    ihdr.push_back(8);                             // bit depth
    ihdr.push_back(image.channels == 1 ? 0 : 2);   // gray / truecolor
    ihdr.push_back(0);                             // compression
    ihdr.push_back(0);                             // filter method
    ihdr.push_back(0);                             // no interlace
    PngChunk(out, "IHDR", ihdr);
    PngChunk(out, "IDAT", zbuf);
    PngChunk(out, "IEND", "");
    if (!out) throw IoError("short write to \"" + path + "\"");
}

}  // namespace bsrt
