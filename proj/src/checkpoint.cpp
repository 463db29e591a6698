#include "robustnet/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <vector>

namespace robustnet {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big,
              "mixed-endian platforms unsupported");

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    T out;
    auto* src = reinterpret_cast<const unsigned char*>(&v);
    auto* dst = reinterpret_cast<unsigned char*>(&out);
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
    return out;
  }
  return v;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::ostream& out, std::uint64_t v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  write_u64(out, bits);
}

void write_scalar_record(std::ostream& out, const std::string& name, double value) {
  write_u32(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u32(out, 0);
  write_f64(out, value);
}

void write_matrix_record(std::ostream& out, const std::string& name, const Matrix& m) {
  write_u32(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u32(out, 2);
  write_u64(out, static_cast<std::uint64_t>(m.rows()));
  write_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) write_f64(out, m(i, j));
}

struct RawTensor {
  std::vector<std::uint64_t> dims;
  std::vector<double> data;
};

bool read_exact(std::istream& in, char* buf, std::size_t len) {
  in.read(buf, static_cast<std::streamsize>(len));
  return static_cast<std::size_t>(in.gcount()) == len;
}

std::uint32_t read_u32_or_throw(std::istream& in, const char* what) {
  std::uint32_t v;
  if (!read_exact(in, reinterpret_cast<char*>(&v), sizeof(v)))
    throw std::runtime_error(std::string("checkpoint: truncated while reading ") + what);
  return to_little(v);
}

std::uint64_t read_u64_or_throw(std::istream& in, const char* what) {
  std::uint64_t v;
  if (!read_exact(in, reinterpret_cast<char*>(&v), sizeof(v)))
    throw std::runtime_error(std::string("checkpoint: truncated while reading ") + what);
  return to_little(v);
}

}  // namespace

void save_checkpoint(const std::string& path, const NetworkParams& params, const NetConfig& cfg,
                     const AdamState* adam) {
  cfg.validate();
  params.check_shapes(cfg);
  if (adam) {
    adam->m.check_shapes(cfg);
    adam->v.check_shapes(cfg);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  out.write("RNDQ", 4);
  write_u32(out, kCheckpointVersion);

  write_scalar_record(out, "config/embed_dim", static_cast<double>(cfg.embed_dim));
  write_scalar_record(out, "config/hidden", static_cast<double>(cfg.hidden));
  write_scalar_record(out, "config/rounds", static_cast<double>(cfg.rounds));

  const auto tensors = params.tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i)
    write_matrix_record(out, NetworkParams::kNames[i], *tensors[i]);

  if (adam) {
    write_scalar_record(out, "adam/lr", adam->lr);
    write_scalar_record(out, "adam/beta1", adam->beta1);
    write_scalar_record(out, "adam/beta2", adam->beta2);
    write_scalar_record(out, "adam/eps", adam->eps);
    write_scalar_record(out, "adam/step", static_cast<double>(adam->step));
    const auto ms = adam->m.tensors();
    const auto vs = adam->v.tensors();
    for (std::size_t i = 0; i < ms.size(); ++i)
      write_matrix_record(out, std::string("adam/m/") + NetworkParams::kNames[i], *ms[i]);
    for (std::size_t i = 0; i < vs.size(); ++i)
      write_matrix_record(out, std::string("adam/v/") + NetworkParams::kNames[i], *vs[i]);
  }
  out.flush();
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);

  char magic[4];
  if (!read_exact(in, magic, 4) || std::memcmp(magic, "RNDQ", 4) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const std::uint32_t version = read_u32_or_throw(in, "version");
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));

  std::map<std::string, RawTensor> raw;
  for (;;) {
    std::uint32_t name_len;
    if (!read_exact(in, reinterpret_cast<char*>(&name_len), sizeof(name_len))) break;  // EOF
    name_len = to_little(name_len);
    if (name_len == 0 || name_len > 4096)
      throw std::runtime_error("checkpoint: implausible tensor name length");
    std::string name(name_len, '\0');
    if (!read_exact(in, name.data(), name_len))
      throw std::runtime_error("checkpoint: truncated tensor name");
    const std::uint32_t rank = read_u32_or_throw(in, "rank");
    if (rank > 8) throw std::runtime_error("checkpoint: implausible rank for " + name);
    RawTensor t;
    std::uint64_t count = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      const std::uint64_t dim = read_u64_or_throw(in, "dimension");
      if (dim == 0 || dim > (1ULL << 32)) throw std::runtime_error("checkpoint: bad dimension in " + name);
      t.dims.push_back(dim);
      count *= dim;
    }
    if (count > (1ULL << 28)) throw std::runtime_error("checkpoint: tensor too large: " + name);
    t.data.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t bits = read_u64_or_throw(in, "payload");
      std::memcpy(&t.data[i], &bits, sizeof(double));
    }
    if (!raw.emplace(name, std::move(t)).second)
      throw std::runtime_error("checkpoint: duplicate tensor " + name);
  }

  auto take_scalar = [&raw, &path](const std::string& name) {
    auto it = raw.find(name);
    if (it == raw.end())
      throw std::runtime_error("checkpoint: missing tensor " + name + " in " + path);
    if (!it->second.dims.empty())
      throw std::runtime_error("checkpoint: " + name + " should be a scalar");
    const double v = it->second.data.at(0);
    raw.erase(it);
    return v;
  };
  auto take_matrix = [&raw, &path](const std::string& name, Eigen::Index rows,
                                   Eigen::Index cols) {
    auto it = raw.find(name);
    if (it == raw.end())
      throw std::runtime_error("checkpoint: missing tensor " + name + " in " + path);
    const RawTensor& t = it->second;
    if (t.dims.size() != 2 || static_cast<Eigen::Index>(t.dims[0]) != rows ||
        static_cast<Eigen::Index>(t.dims[1]) != cols)
      throw std::runtime_error("checkpoint: " + name + " has the wrong shape");
    Matrix m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = t.data[idx++];
    raw.erase(it);
    return m;
  };

  Checkpoint ck;
  ck.config.embed_dim = static_cast<int>(take_scalar("config/embed_dim"));
  ck.config.hidden = static_cast<int>(take_scalar("config/hidden"));
  ck.config.rounds = static_cast<int>(take_scalar("config/rounds"));
  ck.config.validate();

  ck.params = NetworkParams::zeros(ck.config);
  {
    const auto tensors = ck.params.tensors();
    for (std::size_t i = 0; i < tensors.size(); ++i)
      *tensors[i] = take_matrix(NetworkParams::kNames[i], tensors[i]->rows(), tensors[i]->cols());
  }

  if (raw.count("adam/step")) {
    AdamState adam = AdamState::init(ck.config);
    adam.lr = take_scalar("adam/lr");
    adam.beta1 = take_scalar("adam/beta1");
    adam.beta2 = take_scalar("adam/beta2");
    adam.eps = take_scalar("adam/eps");
    adam.step = static_cast<long long>(take_scalar("adam/step"));
    const auto ms = adam.m.tensors();
    const auto vs = adam.v.tensors();
    for (std::size_t i = 0; i < ms.size(); ++i)
      *ms[i] = take_matrix(std::string("adam/m/") + NetworkParams::kNames[i], ms[i]->rows(),
                           ms[i]->cols());
    for (std::size_t i = 0; i < vs.size(); ++i)
      *vs[i] = take_matrix(std::string("adam/v/") + NetworkParams::kNames[i], vs[i]->rows(),
                           vs[i]->cols());
    ck.adam = std::move(adam);
  }

  if (!raw.empty())
    throw std::runtime_error("checkpoint: unrecognized tensor " + raw.begin()->first + " in " +
                             path);
  return ck;
}

}  // namespace robustnet
