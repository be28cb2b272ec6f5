// Copyright 2026 The mtspec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtspec/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mtspec::fft {

Buffer::Buffer(std::size_t n) : size_(n) {
  if (n == 0) return;
  data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!data_) throw std::bad_alloc();
  zero();
}

Buffer::Buffer(Buffer&& other) noexcept : data_(other.data_), size_(other.size_) {
  other.data_ = nullptr;
  other.size_ = 0;
}

Buffer& Buffer::operator=(Buffer&& other) noexcept {
  if (this != &other) {
    if (data_) fftw_free(data_);
    data_ = other.data_;
    size_ = other.size_;
    other.data_ = nullptr;
    other.size_ = 0;
  }
  return *this;
}

Buffer::~Buffer() {
  if (data_) fftw_free(data_);
}

void Buffer::zero() {
  if (data_) std::memset(data_, 0, sizeof(fftw_complex) * size_);
}

namespace {

struct PlanKey {
  std::vector<int> dims;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (sign != o.sign) return sign < o.sign;
    return dims < o.dims;
  }
};

// Plan creation is not thread-safe in FFTW; executing a cached plan on a new
// aligned array is. Plans are created in-place on a scratch buffer and reused
// via the new-array interface.
class PlanCache {
 public:
  fftw_plan get(const std::vector<int>& dims, int sign) {
    const PlanKey key{dims, sign};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    Buffer scratch(total);
    fftw_plan plan = fftw_plan_dft(
        static_cast<int>(dims.size()), dims.data(),
        reinterpret_cast<fftw_complex*>(scratch.data()),
        reinterpret_cast<fftw_complex*>(scratch.data()),
        sign == kForward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache* c = new PlanCache();  // leaked intentionally, plans live for the process
  return *c;
}

}  // namespace

void transform(const std::vector<int>& dims, Buffer& buf, int sign) {
  if (dims.empty()) throw std::invalid_argument("fft dims must be nonempty");
  std::size_t total = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("fft dims must be positive");
    total *= static_cast<std::size_t>(d);
  }
  if (total != buf.size()) throw std::invalid_argument("fft buffer size does not match dims");
  fftw_plan plan = cache().get(dims, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(buf.data()));
}

}  // namespace mtspec::fft
