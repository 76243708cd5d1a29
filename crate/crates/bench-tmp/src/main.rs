use std::time::Instant;
fn main() {
    let h = hypersim_core::sample_uniform_random(12, 4, 0.5, 0).unwrap();
    println!("m = {}, delta = {}", h.m(), h.max_degree());
    let t0 = Instant::now();
    let oracle = hypersim_oracle::enumerate_bruteforce(&h, hypersim_core::TriangleClass::Simple);
    println!("oracle simple: {} triangles in {:?}", oracle.len(), t0.elapsed());
    let t0 = Instant::now();
    let oracle_i = hypersim_oracle::enumerate_bruteforce(&h, hypersim_core::TriangleClass::Induced);
    println!("oracle induced: {} in {:?}", oracle_i.len(), t0.elapsed());
    let bw = hypersim_kernel::Bandwidth::default_for(12);
    let t0 = Instant::now();
    let run = hypersim_algos::bounded_degree_enumerate(&h, hypersim_algos::AlgoModel::Eb, hypersim_core::TriangleClass::Induced, bw).unwrap();
    println!("bounded: {} outputs, rounds {}, {:?}", run.total(), run.metrics.rounds, t0.elapsed());
    let t0 = Instant::now();
    let run = hypersim_algos::light_triangle_enumerate(&h, hypersim_algos::AlgoModel::Eb, None, hypersim_core::TriangleClass::Simple, bw).unwrap();
    println!("light: {} outputs, rounds {}, {:?}", run.total(), run.metrics.rounds, t0.elapsed());
    let t0 = Instant::now();
    let run = hypersim_algos::density_enumerate(&h, hypersim_algos::AlgoModel::Eb, hypersim_core::TriangleClass::Simple, bw).unwrap();
    println!("density: {} outputs, rounds {}, {:?}", run.total(), run.metrics.rounds, t0.elapsed());
    let t0 = Instant::now();
    let run = hypersim_algos::clique_enumerate(&h, hypersim_core::TriangleClass::Simple, bw, false).unwrap();
    let total: usize = run.per_vertex.iter().map(|s| s.len()).sum();
    println!("clique: {} outputs, {:?}", total, t0.elapsed());
}
