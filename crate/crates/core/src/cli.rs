pub fn run(_args: std::env::Args) -> i32 { 0 }
