#include "forgery/digest.hpp"

#include <openssl/evp.h>

#include "forgery/errors.hpp"

namespace forgery {

std::string sha256_hex(const std::uint8_t* bytes, std::size_t size) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    if (!EVP_Digest(bytes, size, md, &md_len, EVP_sha256(), nullptr))
        throw Error("sha256: digest computation failed");
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(md_len * 2);
    for (unsigned int i = 0; i < md_len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

std::string sha256_hex(const std::vector<std::uint8_t>& bytes) {
    return sha256_hex(bytes.data(), bytes.size());
}

std::string sha256_hex(const std::string& text) {
    return sha256_hex(reinterpret_cast<const std::uint8_t*>(text.data()),
                      text.size());
}

} // namespace forgery
