fn main() { std::process::exit(ptqes::cli::run(std::env::args())); }
