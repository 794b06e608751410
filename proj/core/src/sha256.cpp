#include "tracemix/sha256.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace tracemix {

Digest sha256(BytesView data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("sha256 failed");
    }
    return out;
}

Digest sha256_tagged(const std::string& tag, BytesView data) {
    Bytes buf;
    buf.reserve(4 + tag.size() + data.size());
    append_framed(buf, tag);
    append(buf, data);
    return sha256(buf);
}

Bytes sha256_stream(const Digest& key, size_t nbytes) {
    Bytes out;
    out.reserve(nbytes);
    uint64_t counter = 0;
    while (out.size() < nbytes) {
        Bytes block(key.begin(), key.end());
        append_u64(block, counter++);
        Digest d = sha256(block);
        size_t take = std::min<size_t>(d.size(), nbytes - out.size());
        out.insert(out.end(), d.begin(), d.begin() + take);
    }
    return out;
}

}  // namespace tracemix
