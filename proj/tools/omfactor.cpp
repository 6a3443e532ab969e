// placeholder; full CLI arrives with the higher layers
int main() { return 0; }
