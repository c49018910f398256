#include "digest.hpp"

#include <openssl/evp.h>

#include <memory>

#include "o2di/errors.hpp"

namespace o2di::detail {

namespace {

struct CtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

template <std::size_t N>
std::array<std::uint8_t, N> digest(const EVP_MD* md, std::initializer_list<BytesView> parts) {
  thread_local std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx(EVP_MD_CTX_new());
  std::array<std::uint8_t, N> out{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1) throw Error("EVP_DigestInit_ex failed");
  for (auto p : parts) {
    if (EVP_DigestUpdate(ctx.get(), p.data(), p.size()) != 1) throw Error("EVP_DigestUpdate failed");
  }
  if (EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != N) {
    throw Error("EVP_DigestFinal_ex failed");
  }
  return out;
}

}  // namespace

Digest256 sha3_256(std::initializer_list<BytesView> parts) { return digest<32>(EVP_sha3_256(), parts); }

Digest512 sha3_512(std::initializer_list<BytesView> parts) { return digest<64>(EVP_sha3_512(), parts); }

}  // namespace o2di::detail
