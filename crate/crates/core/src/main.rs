fn main() {
    std::process::exit(reuse_miner::cli::run(std::env::args_os()));
}
