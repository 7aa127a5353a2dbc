fn main() {
    std::process::exit(qclock::cli::run(std::env::args_os()));
}
