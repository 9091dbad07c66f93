#include <openssl/evp.h>

#include <fstream>
#include <memory>
#include <stdexcept>

#include "fibermetric/io.hpp"

namespace fm {

namespace {

std::string to_hex(const unsigned char* digest, unsigned len) {
  static const char* hex = "0123456789abcdef";
  std::string out(2 * len, '0');
  for (unsigned k = 0; k < len; ++k) {
    out[2 * k] = hex[digest[k] >> 4];
    out[2 * k + 1] = hex[digest[k] & 0xf];
  }
  return out;
}

using CtxPtr = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

CtxPtr make_ctx() {
  CtxPtr ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: EVP init failed");
  return ctx;
}

std::string finish(CtxPtr& ctx) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256: EVP final failed");
  return to_hex(digest, len);
}

}  // namespace

std::string sha256_hex(const void* data, std::size_t len) {
  CtxPtr ctx = make_ctx();
  if (EVP_DigestUpdate(ctx.get(), data, len) != 1)
    throw std::runtime_error("sha256: EVP update failed");
  return finish(ctx);
}

std::string sha256_hex(const std::string& s) {
  return sha256_hex(s.data(), s.size());
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  CtxPtr ctx = make_ctx();
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx.get(), buf, std::size_t(got)) != 1)
      throw std::runtime_error("sha256: EVP update failed");
  }
  return finish(ctx);
}

}  // namespace fm
