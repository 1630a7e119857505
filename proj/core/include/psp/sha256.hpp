#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace psp {

/// Incremental SHA-256, used for content-addressed run ids.
class Sha256 {
public:
    Sha256();

    Sha256& update(std::string_view data);
    /// Finalizes and returns the lowercase hex digest. The object must not be
    /// updated afterwards.
    std::string hex_digest();

    static std::string hash_hex(std::string_view data);

private:
    void process_block(const unsigned char* block);

    std::uint32_t state_[8];
    unsigned char buffer_[64];
    std::uint64_t total_len_ = 0;
    std::size_t buffer_len_ = 0;
};

}  // namespace psp
