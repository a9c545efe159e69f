#include "sua/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <memory>
#include <stdexcept>

#include "sua/errors.hpp"

namespace sua {
namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

CipherCtx new_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw ChannelError("EVP context allocation failed");
  return ctx;
}

[[noreturn]] void fail(const char* what) { throw ChannelError(std::string("cipher failure: ") + what); }

}  // namespace

std::vector<uint8_t> aes_ecb_encrypt(const AesKey& key, std::span<const uint8_t> plaintext) {
  auto ctx = new_ctx();
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ecb(), nullptr, key.data(), nullptr) != 1)
    fail("ecb init");
  std::vector<uint8_t> out(plaintext.size() + kAesBlock);
  int len1 = 0, len2 = 0;
  if (EVP_EncryptUpdate(ctx.get(), out.data(), &len1, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1)
    fail("ecb update");
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + len1, &len2) != 1) fail("ecb final");
  out.resize(static_cast<size_t>(len1 + len2));
  return out;
}

std::vector<uint8_t> aes_ecb_decrypt(const AesKey& key, std::span<const uint8_t> ciphertext) {
  if (ciphertext.empty() || ciphertext.size() % kAesBlock != 0)
    throw ChannelError("ECB ciphertext length is not a positive multiple of the block size");
  auto ctx = new_ctx();
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_ecb(), nullptr, key.data(), nullptr) != 1)
    fail("ecb init");
  std::vector<uint8_t> out(ciphertext.size());
  int len1 = 0, len2 = 0;
  if (EVP_DecryptUpdate(ctx.get(), out.data(), &len1, ciphertext.data(),
                        static_cast<int>(ciphertext.size())) != 1)
    fail("ecb update");
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len1, &len2) != 1)
    throw ChannelError("ECB padding check failed (wrong key or corrupt data)");
  out.resize(static_cast<size_t>(len1 + len2));
  return out;
}

std::vector<uint8_t> aes_gcm_seal(const AesKey& key, std::span<const uint8_t> plaintext,
                                  std::span<const uint8_t> nonce) {
  if (nonce.size() != kGcmNonceLen) throw ParamError("GCM nonce must be 12 bytes");
  auto ctx = new_ctx();
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr) != 1)
    fail("gcm init");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kGcmNonceLen, nullptr) != 1)
    fail("gcm ivlen");
  if (EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) != 1)
    fail("gcm key/iv");

  std::vector<uint8_t> out(kGcmNonceLen + plaintext.size() + kGcmTagLen);
  std::copy(nonce.begin(), nonce.end(), out.begin());
  int len1 = 0, len2 = 0;
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data() + kGcmNonceLen, &len1, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1)
    fail("gcm update");
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + kGcmNonceLen + len1, &len2) != 1)
    fail("gcm final");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kGcmTagLen,
                          out.data() + kGcmNonceLen + len1 + len2) != 1)
    fail("gcm tag");
  out.resize(kGcmNonceLen + static_cast<size_t>(len1 + len2) + kGcmTagLen);
  return out;
}

std::vector<uint8_t> aes_gcm_open(const AesKey& key, std::span<const uint8_t> sealed) {
  if (sealed.size() < kGcmNonceLen + kGcmTagLen)
    throw AuthenticationError("sealed message shorter than nonce plus tag");
  const uint8_t* nonce = sealed.data();
  const size_t ct_len = sealed.size() - kGcmNonceLen - kGcmTagLen;
  const uint8_t* ct = sealed.data() + kGcmNonceLen;
  std::array<uint8_t, kGcmTagLen> tag;
  std::copy_n(sealed.data() + kGcmNonceLen + ct_len, kGcmTagLen, tag.begin());

  auto ctx = new_ctx();
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr) != 1)
    fail("gcm init");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kGcmNonceLen, nullptr) != 1)
    fail("gcm ivlen");
  if (EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce) != 1) fail("gcm key/iv");

  std::vector<uint8_t> out(ct_len);
  int len1 = 0, len2 = 0;
  if (ct_len > 0 &&
      EVP_DecryptUpdate(ctx.get(), out.data(), &len1, ct, static_cast<int>(ct_len)) != 1)
    fail("gcm update");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kGcmTagLen, tag.data()) != 1)
    fail("gcm set tag");
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len1, &len2) != 1)
    throw AuthenticationError("GCM authentication failed");
  out.resize(static_cast<size_t>(len1 + len2));
  return out;
}

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
  std::array<uint8_t, 32> digest;
  SHA256(data.data(), data.size(), digest.data());
  return digest;
}

std::string to_hex(std::span<const uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::string sha256_hex(std::span<const uint8_t> data) { return to_hex(sha256(data)); }

std::string sha256_hex(const std::string& data) {
  return sha256_hex(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(data.data()),
                                             data.size()));
}

}  // namespace sua
