#ifndef BOSEGAS_PARALLEL_HPP
#define BOSEGAS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace bosegas {

// Run body(i) for i in [0, n) across at most `threads` workers. Results must
// go into caller-owned per-index slots; then the outcome is independent of
// the thread count. The first exception thrown by any body is rethrown on
// the calling thread after all workers join. threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

// Hardware concurrency with a sane floor of 1.
int default_thread_count();

} // namespace bosegas

#endif
