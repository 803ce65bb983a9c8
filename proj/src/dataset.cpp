#include "robustfed/dataset.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "robustfed/errors.hpp"

namespace robustfed {

namespace {

// Big-endian u32 at the current stream position; offset reported on failure.
std::uint32_t read_u32_be(std::ifstream& in, const std::string& path,
                          std::size_t offset) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw FormatError(path + ": truncated at byte offset " +
                      std::to_string(offset));
  }
  return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
         (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

std::vector<unsigned char> read_payload(std::ifstream& in,
                                        const std::string& path,
                                        std::size_t count,
                                        std::size_t header_size) {
  std::vector<unsigned char> payload(count);
  if (!in.read(reinterpret_cast<char*>(payload.data()),
               static_cast<std::streamsize>(count))) {
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    throw FormatError(path + ": truncated at byte offset " +
                      std::to_string(header_size + got));
  }
  return payload;
}

struct IdxFile {
  std::vector<std::uint32_t> dims;
  std::vector<unsigned char> payload;
};

// IDX layout: 4-byte magic 0x00 0x00 <dtype> <ndims>, ndims big-endian u32
// dimensions, then the payload. Only dtype 0x08 (unsigned byte) is accepted.
IdxFile read_idx_file(const std::string& path, unsigned expected_ndims) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open");
  const std::uint32_t magic = read_u32_be(in, path, 0);
  const unsigned dtype = (magic >> 8) & 0xff;
  const unsigned ndims = magic & 0xff;
  if ((magic >> 16) != 0 || dtype != 0x08) {
    throw FormatError(path + ": bad magic number at byte offset 0");
  }
  if (ndims != expected_ndims) {
    throw FormatError(path + ": expected " + std::to_string(expected_ndims) +
                      " dimensions, got " + std::to_string(ndims) +
                      " at byte offset 3");
  }
  IdxFile file;
  std::size_t count = 1;
  for (unsigned i = 0; i < ndims; ++i) {
    const std::uint32_t d = read_u32_be(in, path, 4 + 4 * i);
    file.dims.push_back(d);
    count *= d;
  }
  const std::size_t header = 4 + 4 * ndims;
  file.payload = read_payload(in, path, count, header);
  return file;
}

}  // namespace

Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path) {
  const IdxFile images = read_idx_file(images_path, 3);
  const IdxFile labels = read_idx_file(labels_path, 1);
  if (images.dims[0] != labels.dims[0]) {
    throw FormatError(images_path + ": image count " +
                      std::to_string(images.dims[0]) +
                      " does not match label count " +
                      std::to_string(labels.dims[0]));
  }
  Dataset data;
  data.feature_dim = std::size_t(images.dims[1]) * images.dims[2];
  data.features.reserve(images.payload.size());
  for (unsigned char byte : images.payload) {
    data.features.push_back(static_cast<double>(byte) / 255.0);
  }
  data.labels.reserve(labels.payload.size());
  int max_label = 0;
  for (unsigned char byte : labels.payload) {
    data.labels.push_back(static_cast<int>(byte));
    max_label = std::max(max_label, static_cast<int>(byte));
  }
  data.num_classes = max_label + 1;
  return data;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  int max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError(path + ": line " + std::to_string(line_no) +
                          ": cannot parse \"" + cell + "\"");
      }
    }
    if (values.size() < 2) {
      throw FormatError(path + ": line " + std::to_string(line_no) +
                        ": expected label and at least one feature");
    }
    const int label = static_cast<int>(values[0]);
    if (label < 0 || values[0] != label) {
      throw FormatError(path + ": line " + std::to_string(line_no) +
                        ": label must be a non-negative integer");
    }
    if (data.feature_dim == 0) {
      data.feature_dim = values.size() - 1;
    } else if (values.size() - 1 != data.feature_dim) {
      throw FormatError(path + ": line " + std::to_string(line_no) +
                        ": inconsistent feature count");
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
        throw FormatError(path + ": line " + std::to_string(line_no) +
                          ": feature outside [0, 1]");
      }
      data.features.push_back(values[i]);
    }
    data.labels.push_back(label);
    max_label = std::max(max_label, label);
  }
  if (data.labels.empty()) throw FormatError(path + ": no rows");
  data.num_classes = max_label + 1;
  return data;
}

std::pair<Dataset, Dataset> make_blobs(const SyntheticSpec& spec,
                                       std::size_t train_count,
                                       std::size_t test_count,
                                       std::uint64_t seed) {
  if (spec.features < 1 || spec.classes < 2) {
    throw UsageError("make_blobs: need features >= 1 and classes >= 2");
  }
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> proto_dist(0.1, 0.9);
  std::vector<double> prototypes(
      static_cast<std::size_t>(spec.classes) * spec.features);
  for (double& p : prototypes) p = proto_dist(rng);
  if (spec.overlap) {
    const auto [a, b] = spec.overlap_classes;
    if (a < 0 || a >= spec.classes || b < 0 || b >= spec.classes || a == b) {
      throw UsageError("make_blobs: bad overlap_classes");
    }
    std::normal_distribution<double> jitter(0.0, spec.overlap_std);
    for (int j = 0; j < spec.features; ++j) {
      const double moved = prototypes[std::size_t(a) * spec.features + j] + jitter(rng);
      prototypes[std::size_t(b) * spec.features + j] = std::clamp(moved, 0.0, 1.0);
    }
  }

  std::normal_distribution<double> noise(0.0, spec.noise_std);
  auto generate = [&](std::size_t count) {
    Dataset data;
    data.feature_dim = static_cast<std::size_t>(spec.features);
    data.num_classes = spec.classes;
    data.features.reserve(count * data.feature_dim);
    data.labels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const int label = static_cast<int>(i % spec.classes);
      data.labels.push_back(label);
      const double* proto = &prototypes[std::size_t(label) * spec.features];
      for (int j = 0; j < spec.features; ++j) {
        data.features.push_back(std::clamp(proto[j] + noise(rng), 0.0, 1.0));
      }
    }
    return data;
  };
  Dataset train = generate(train_count);
  Dataset test = generate(test_count);
  return {std::move(train), std::move(test)};
}

std::vector<Dataset> partition_iid(const Dataset& data, int num_clients,
                                   Rng& rng) {
  if (num_clients < 1) throw UsageError("partition_iid: num_clients < 1");
  if (static_cast<std::size_t>(num_clients) > data.size()) {
    throw UsageError("partition_iid: more clients than examples");
  }
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t base = data.size() / num_clients;
  const std::size_t remainder = data.size() % num_clients;
  std::vector<Dataset> shards;
  shards.reserve(num_clients);
  std::size_t cursor = 0;
  for (int c = 0; c < num_clients; ++c) {
    const std::size_t take = base + (static_cast<std::size_t>(c) < remainder ? 1 : 0);
    Dataset shard;
    shard.feature_dim = data.feature_dim;
    shard.num_classes = data.num_classes;
    shard.features.reserve(take * data.feature_dim);
    shard.labels.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t row = order[cursor++];
      const auto x = data.example(row);
      shard.features.insert(shard.features.end(), x.begin(), x.end());
      shard.labels.push_back(data.labels[row]);
    }
    shards.push_back(std::move(shard));
  }
  return shards;
}

}  // namespace robustfed
