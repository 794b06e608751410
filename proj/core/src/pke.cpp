#include "tracemix/pke.hpp"

namespace tracemix {

namespace {

Digest kem_key(const G1& ephemeral, const G1& shared) {
    Bytes t;
    ephemeral.to_bytes(t);
    shared.to_bytes(t);
    return sha256_tagged("tracemix/pke-kem", t);
}

}  // namespace

PkeKeyPair pke_keygen(const SetupParams& params, Rng& rng) {
    Scalar sk = random_nonzero_scalar(rng);
    return {sk, params.g1 * sk};
}

Bytes pke_enc(const SetupParams& params, const G1& pk, BytesView msg, Rng& rng) {
    Scalar k = random_nonzero_scalar(rng);
    G1 c0 = params.g1 * k;
    Digest key = kem_key(c0, pk * k);
    Bytes stream = sha256_stream(key, msg.size());
    Bytes out;
    c0.to_bytes(out);
    for (size_t i = 0; i < msg.size(); ++i) out.push_back(msg[i] ^ stream[i]);
    return out;
}

Bytes pke_dec(const SetupParams& params, const Scalar& sk, BytesView ct) {
    (void)params;
    if (ct.size() < 32) throw std::runtime_error("pke_dec: truncated ciphertext");
    auto c0 = G1::from_bytes(ct.subspan(0, 32));
    if (!c0) throw std::runtime_error("pke_dec: malformed ephemeral key");
    Digest key = kem_key(*c0, *c0 * sk);
    BytesView body = ct.subspan(32);
    Bytes stream = sha256_stream(key, body.size());
    Bytes out(body.size());
    for (size_t i = 0; i < body.size(); ++i) out[i] = body[i] ^ stream[i];
    return out;
}

}  // namespace tracemix
