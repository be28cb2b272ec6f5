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

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mtspec::fft {

/// Work buffer with the alignment FFTW plans were created for. All transforms
/// below require their data to live in one of these.
class Buffer {
 public:
  Buffer() = default;
  explicit Buffer(std::size_t n);
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  Buffer(Buffer&& other) noexcept;
  Buffer& operator=(Buffer&& other) noexcept;
  ~Buffer();

  std::complex<double>* data() { return data_; }
  const std::complex<double>* data() const { return data_; }
  std::size_t size() const { return size_; }
  std::complex<double>& operator[](std::size_t i) { return data_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return data_[i]; }
  void zero();

 private:
  std::complex<double>* data_ = nullptr;
  std::size_t size_ = 0;
};

inline constexpr int kForward = -1;   // e^{-2 pi i <j,m>/R}
inline constexpr int kBackward = +1;  // e^{+2 pi i <j,m>/R}, unnormalized

/// In-place d-dimensional complex DFT over the row-major array in `buf`
/// (product of dims must equal buf.size()). Plans are cached per (dims, sign)
/// and shared across threads; concurrent transforms on distinct buffers are
/// safe.
void transform(const std::vector<int>& dims, Buffer& buf, int sign);

}  // namespace mtspec::fft
