//! Render two attractors through the command-line front end: a dust and a
//! blob.

fn main() {
    let runs = [
        ("bibeta-dust.pgm", "1.7", "1.8"),
        ("bibeta-blob.pgm", "1.2", "1.3"),
    ];
    for (out, b1, b2) in runs {
        let code = bibeta::cli::run([
            "bibeta",
            "render-attractor",
            "--beta1",
            b1,
            "--beta2",
            b2,
            "--points",
            "200000",
            "--size",
            "400",
            "--out",
            out,
        ]);
        assert_eq!(code, 0);
        println!("{out}: attractor at ({b1}, {b2})");
    }
    println!("the first is a scattered dust, the second a filled blob");
}
