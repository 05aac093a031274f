// Benchmark comparing the serial reference kernels against the OpenMP ones:
// answer evaluation + block scanning inside a full session, the privacy
// audit's sampling loop, and batched bounded-distance decoding.

#include <chrono>
#include <cstdio>
#include <numeric>

#include "bpir/audit.hpp"
#include "bpir/experiment.hpp"

using namespace bpir;

namespace {

template <class F>
double timed(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %7.3fs   openmp %7.3fs   speedup %.2fx\n", name, serial,
                parallel, serial / parallel);
}

void bench_session(Exec exec) {
    SystemParams p;
    p.num_databases = 6;
    p.num_messages = 2;
    p.num_byzantine = 2;
    p.blocks = 4000;
    p.desired_index = 1;
    p.alpha_override = 8;
    SimulationOptions options;
    options.exec = exec;
    const RunReport run = run_simulation(p, "worst_case", 77, options);
    if (!run.decode_ok) std::printf("!! decode failed\n");
}

void bench_audit(Exec exec) {
    SystemParams p;
    p.num_databases = 3;
    p.num_messages = 2;
    p.num_byzantine = 1;
    p.blocks = 1;
    p.field_modulus = 5;
    p.desired_index = 1;
    PrivacyAuditOptions options;
    options.samples = 30000;
    options.exec = exec;
    const PrivacyAuditReport report = privacy_audit(p, 7, options);
    if (!report.pass) std::printf("!! audit failed\n");
}

void bench_decode(Exec exec) {
    const PrimeField field(65537);
    const MdsCode code = MdsCode::build(field, 48, 16);
    const int batch = 1500;
    std::vector<char> bad(batch, 0);
    parallel_for(exec, batch, [&](std::size_t t) {
        Rng rng(derive_seed(0xBE7C4, t));
        std::vector<Elem> msg(16);
        for (auto& v : msg) v = field.sample(rng);
        const auto cw = code.encode(msg);
        std::vector<std::optional<Elem>> word(cw.begin(), cw.end());
        std::vector<std::size_t> coords(48);
        std::iota(coords.begin(), coords.end(), 0);
        for (int i = 0; i < 16; ++i) {
            std::swap(coords[i], coords[i + rng.uniform_below(48 - i)]);
        }
        for (int i = 0; i < 16; ++i) {
            auto& v = word[coords[i]];
            v = (*v + 1 + rng.uniform_below(65536)) % 65537;
        }
        if (correct(ReceivedWord{code, word}) != msg) bad[t] = 1;
    });
    for (char b : bad) {
        if (b) std::printf("!! decode mismatch\n");
    }
}

} // namespace

int main() {
    std::printf("threads available: %d\n", max_threads());
    report("session l=4000 (6,2,2)", timed([] { bench_session(Exec::Serial); }),
           timed([] { bench_session(Exec::Parallel); }));
    report("privacy audit 30k samples", timed([] { bench_audit(Exec::Serial); }),
           timed([] { bench_audit(Exec::Parallel); }));
    report("1500 decodes of (48,16)", timed([] { bench_decode(Exec::Serial); }),
           timed([] { bench_decode(Exec::Parallel); }));
    return 0;
}
