#include "csb/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace csb {

static std::array<unsigned char, 32> sha256_raw(std::string_view data) {
    std::array<unsigned char, 32> digest{};
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr
        || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx, data.data(), data.size()) != 1
        || EVP_DigestFinal_ex(ctx, digest.data(), &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    return digest;
}

static std::string to_hex(const unsigned char* bytes, size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out(n * 2, '0');
    for (size_t i = 0; i < n; ++i) {
        out[2 * i] = digits[bytes[i] >> 4];
        out[2 * i + 1] = digits[bytes[i] & 0xF];
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    auto d = sha256_raw(data);
    return to_hex(d.data(), d.size());
}

std::string short_hash(std::string_view data) {
    auto d = sha256_raw(data);
    return to_hex(d.data(), 8);
}

uint64_t hash64(std::string_view data) {
    auto d = sha256_raw(data);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | d[i];
    return v;
}

}  // namespace csb
