# 測試套件初始化文件