//! Uniform sample of a stream, printing the held item as the stream grows.
//!
//! cargo run --example stream_uniform

use frugal_sampling::streaming::StreamSampler;
use frugal_sampling::{BitTape, ErrorParam};

fn main() {
    let eps = ErrorParam::new(1, 8).unwrap();
    let mut sampler = StreamSampler::new(eps);
    let mut tape = BitTape::seeded(2024);
    let words = "the quick brown fox jumps over the lazy dog again and again".split(' ');
    for (t, word) in words.enumerate() {
        sampler.process(word, &mut tape).unwrap();
        let held = sampler.current_sample().copied().unwrap_or("BOT");
        println!(
            "t={:>2} sample={held:<6} bits={}",
            t + 1,
            tape.bits_consumed()
        );
    }
    println!("payloads held at once: {}", sampler.max_buffered());
}
