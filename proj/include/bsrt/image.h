// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_IMAGE_H
#define BSRT_IMAGE_H

#include <bsrt/bsrt.h>

#include <string>
#include <vector>

namespace bsrt {

// Minimal float image container. Pixels are stored row-major, top row first,
// with `channels` interleaved floats per pixel (1 = grayscale, 3 = RGB).
struct Image {
    Image() = default;
    Image(int width, int height, int channels)
        : width(width),
          height(height),
          channels(channels),
          pixels(size_t(width) * height * channels, 0.f) {}

    float &At(int x, int y, int c) {
        return pixels[(size_t(y) * width + x) * channels + c];
    }
    float At(int x, int y, int c) const {
        return pixels[(size_t(y) * width + x) * channels + c];
    }

    int width = 0, height = 0, channels = 0;
    std::vector<float> pixels;
};

// Writes a PFM file ("Pf" grayscale or "PF" RGB, little-endian scale -1.0).
// Throws IoError on failure or if channels is not 1 or 3.
void WritePfm(const std::string &path, const Image &image);

// Reads a PFM file written by WritePfm (or any conforming PFM). The
// write/read round trip reproduces the float payload bit-exactly.
Image ReadPfm(const std::string &path);

// Writes an 8-bit PNG (grayscale or RGB to match image.channels) after tone
// mapping each value as clamp(value * exposure, 0, 1)^(1/gamma).
// Throws IoError on failure.
void WritePng(const std::string &path, const Image &image,
              float exposure = 1.f, float gamma = 2.2f);

}  // namespace bsrt

#endif  // BSRT_IMAGE_H
