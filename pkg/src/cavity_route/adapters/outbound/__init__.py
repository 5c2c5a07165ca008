"""出站适配器 - 配置读取与轨迹写出等被驱动适配器"""
