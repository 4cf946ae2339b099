fn main() {
    std::process::exit(optiflow::run(std::env::args_os()));
}
