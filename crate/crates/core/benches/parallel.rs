use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use veechkit::affine::{geometric_veech_group, kernel_of_d, DEFAULT_ORBIT_CAP};
use veechkit::par::{set_parallelism, Parallelism};
use veechkit::{corpus, fuchsian, sections, Mat2};

fn modes() -> [(&'static str, Parallelism); 2] {
    [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)]
}

fn word_enumeration(c: &mut Criterion) {
    let gens = fuchsian::generators(&[Mat2::ints(1, 1, 0, 1), Mat2::ints(1, 0, 2, 1)]).unwrap();
    let mut g = c.benchmark_group("enumerate_words");
    for (name, mode) in modes() {
        g.bench_function(BenchmarkId::new(name, 7), |b| {
            set_parallelism(mode);
            b.iter(|| fuchsian::enumerate(&gens, 7))
        });
    }
    g.finish();
}

fn section_search(c: &mut Criterion) {
    let s = corpus::staircase(3).unwrap();
    let veech = geometric_veech_group(&s, DEFAULT_ORBIT_CAP).unwrap();
    let kernel = kernel_of_d(&s).unwrap();
    let mut g = c.benchmark_group("section_candidates");
    g.sample_size(10);
    for (name, mode) in modes() {
        g.bench_function(BenchmarkId::new(name, "staircase-3"), |b| {
            set_parallelism(mode);
            b.iter(|| {
                let maps = sections::generator_maps(&s, &veech.generators).unwrap();
                sections::section_candidates(&s, &maps, &kernel).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, word_enumeration, section_search);
criterion_main!(benches);
