#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace minorclt {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Results must be written by index.
// The exception thrown by the lowest failing index is rethrown.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &fn) {
	if(workers <= 1 || count <= 1) {
		for(std::size_t i = 0; i < count; i++) {
			fn(i);
		}
		return;
	}
	std::atomic<std::size_t> next{0};
	std::mutex mtx;
	std::size_t failed_index = count;
	std::exception_ptr failure;

	auto work = [&]() {
		for(;;) {
			std::size_t i = next.fetch_add(1);
			if(i >= count) {
				return;
			}
			try {
				fn(i);
			} catch(...) {
				std::lock_guard lock{mtx};
				if(i < failed_index) {
					failed_index = i;
					failure = std::current_exception();
				}
			}
		}
	};
	std::vector<std::thread> pool;
	std::size_t n = std::min<std::size_t>(workers, count);
	for(std::size_t t = 0; t < n; t++) {
		pool.emplace_back(work);
	}
	for(auto &t : pool) {
		t.join();
	}
	if(failure) {
		std::rethrow_exception(failure);
	}
}

}
