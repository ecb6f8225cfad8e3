fn main() {
    std::process::exit(sdc_bench::run_command(std::env::args_os()));
}
