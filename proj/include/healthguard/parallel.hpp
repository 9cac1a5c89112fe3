#pragma once

namespace hg {

/// Thread cap from HG_THREADS (unset or 0 = OpenMP default). Read once.
int thread_limit();

/// Applies HG_THREADS to the OpenMP runtime. Call once at program start.
void configure_threads_from_env();

/// Overrides the thread cap for the rest of the process.
void set_thread_limit(int n);

}  // namespace hg
