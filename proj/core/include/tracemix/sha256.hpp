#pragma once

#include <array>

#include "tracemix/bytes.hpp"

namespace tracemix {

using Digest = std::array<uint8_t, 32>;

Digest sha256(BytesView data);

// sha256(frame(tag) || data); the framing keeps tags from colliding with
// data prefixes.
Digest sha256_tagged(const std::string& tag, BytesView data);

// Deterministic keystream: block i is sha256(key || be64(i)). Used by the
// share-channel cipher.
Bytes sha256_stream(const Digest& key, size_t nbytes);

}  // namespace tracemix
