//! Explicit hash codes: verification with counterexamples, exhaustive and
//! greedy search, and the text format.

use phash_bounds::codes::{max_code_search, verify_hash_code, Code, Verdict};

fn main() -> phash_bounds::Result<()> {
    let code = Code::parse("3 2\n11\n12\n21\n")?;
    match verify_hash_code(&code, 3)? {
        Verdict::Holds => println!("holds"),
        Verdict::Counterexample(set) => {
            let words: Vec<String> = set.iter().map(|&i| code.format_word(&code.words()[i])).collect();
            println!("no separating coordinate for {words:?}");
        }
    }

    for (b, k, n) in [(3, 3, 2), (3, 3, 3), (4, 3, 2), (4, 4, 3)] {
        let found = max_code_search(b, k, n, 200_000)?;
        assert!(verify_hash_code(&found.code, k)?.holds());
        println!(
            "b={b} k={k} n={n}: {:?} search found {} words (rate {:.4}) in {} steps",
            found.mode,
            found.code.len(),
            found.code.rate(),
            found.nodes
        );
    }
    print!("{}", max_code_search(4, 4, 2, 1_000)?.code.to_text());
    Ok(())
}
