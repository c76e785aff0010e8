// Copyright 2026 The fingerfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FINGERFUZZ_FILEIO_HPP
#define FINGERFUZZ_FILEIO_HPP

#include <functional>
#include <iosfwd>
#include <string>

namespace fingerfuzz {

// Writes through a temporary sibling file and renames it over `path`, so a
// reader never observes a truncated file. Throws IoError.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& writer);

std::string read_file(const std::string& path);

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_FILEIO_HPP
