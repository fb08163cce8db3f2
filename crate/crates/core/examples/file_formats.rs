//! The system text format and the proof file format, round-tripped.

use saproof::derive::{refute, RefuteOptions};
use saproof::encoder::EncodingMode;
use saproof::format::{emit_proof, emit_system, parse_proof, parse_system, ProofFile};
use saproof::gf::{solve, Solution};

fn main() {
    let text = "# a pair over F_3\nfield 3\nvars 2\nx1 + x2 = 1\n2*x1 + 2*x2 = 1\n";
    let sys = parse_system(text).unwrap();
    print!("canonical system:\n{}", emit_system(&sys));

    let Solution::Unsatisfiable(cert) = solve(&sys).unwrap() else {
        unreachable!()
    };
    let proof = refute(&sys, &cert, EncodingMode::Fp, RefuteOptions::default()).unwrap();
    let file = ProofFile { field: 3, mode: EncodingMode::Fp, proof };
    let emitted = emit_proof(&file);
    println!("proof file: {} bytes, {} lines of text", emitted.len(), emitted.lines().count());
    for line in emitted.lines().take(3) {
        println!("  {line}");
    }
    let back = parse_proof(&emitted).unwrap();
    println!("round trip identical: {}", back == file && emit_proof(&back) == emitted);

    match parse_system("field 3\nvars 2\nx1 + x3 = 1\n") {
        Err(e) => println!("bad input: {e}"),
        Ok(_) => unreachable!(),
    }
}
