#pragma once

#include <cstddef>
#include <functional>

namespace qisim {

// Worker count from QISIM_WORKERS, falling back to hardware concurrency.
std::size_t worker_count();

// Runs task(i) for i in [0, count) across worker_count() threads. Tasks must
// write only to disjoint state; callers merge results in index order so the
// outcome does not depend on the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace qisim
