"""入站适配器 - 命令行等驱动适配器"""
