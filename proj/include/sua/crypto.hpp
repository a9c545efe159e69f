#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sua {

using AesKey = std::array<uint8_t, 16>;

constexpr size_t kAesBlock = 16;
constexpr size_t kGcmNonceLen = 12;
constexpr size_t kGcmTagLen = 16;

// AES-128-ECB with PKCS#7 padding. ECB leaks equal-block structure and is
// provided only as a benchmark-comparable mode; it is not a secure channel.
std::vector<uint8_t> aes_ecb_encrypt(const AesKey& key, std::span<const uint8_t> plaintext);
std::vector<uint8_t> aes_ecb_decrypt(const AesKey& key, std::span<const uint8_t> ciphertext);

// AES-128-GCM. Output layout: 12-byte nonce || ciphertext || 16-byte tag.
// Tampering with any byte makes open() throw AuthenticationError.
std::vector<uint8_t> aes_gcm_seal(const AesKey& key, std::span<const uint8_t> plaintext,
                                  std::span<const uint8_t> nonce);
std::vector<uint8_t> aes_gcm_open(const AesKey& key, std::span<const uint8_t> sealed);

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);
std::string sha256_hex(std::span<const uint8_t> data);
std::string sha256_hex(const std::string& data);

std::string to_hex(std::span<const uint8_t> data);

}  // namespace sua
