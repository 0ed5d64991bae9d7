// Copyright 2026 The lqfetch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "lqfetch/kernels/kernels.hpp"

namespace lqfetch::kernels {
namespace {

const KernelTable *initial_choice() {
    if (const char *env = std::getenv("LQFETCH_ISA")) {
        const std::string want(env);
        if (want == "scalar") {
            return &scalar_kernels();
        }
        if (want == "avx2" && avx2_kernels() != nullptr) {
            return avx2_kernels();
        }
    }
    if (const KernelTable *t = avx2_kernels()) {
        return t;
    }
    return &scalar_kernels();
}

std::atomic<const KernelTable *> &current() {
    static std::atomic<const KernelTable *> table{initial_choice()};
    return table;
}

}  // namespace

bool available(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
            return avx2_kernels() != nullptr;
    }
    return false;
}

const KernelTable &active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            current().store(&scalar_kernels(), std::memory_order_release);
            return;
        case Isa::avx2:
            if (avx2_kernels() == nullptr) {
                throw std::runtime_error("avx2 kernels are not available on this host");
            }
            current().store(avx2_kernels(), std::memory_order_release);
            return;
    }
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
    }
    return "unknown";
}

}  // namespace lqfetch::kernels
