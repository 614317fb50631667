#pragma once

// Batch execution of per-sample kernels. The parallel backend distributes
// loop indices over OpenMP threads; every kernel writes only to its own
// index, so results are bitwise identical to the serial reference path.

#include <functional>

namespace kver {

enum class Exec { serial, parallel };

void for_each_index(int n, Exec mode, const std::function<void(int)>& body);

int batch_thread_count();

}  // namespace kver
