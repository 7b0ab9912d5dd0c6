pub struct KernelError;
pub struct KernelReport;
