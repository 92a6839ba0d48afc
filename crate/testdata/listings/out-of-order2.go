package main

import "fmt"

func work(cInt chan int, cStr chan int) {
	fmt.Println(<-cInt)
	fmt.Println(<-cStr)
}

func main() {
	cInt := make(chan int)
	cStr := make(chan int)
	go work(cInt, cStr)
	cStr <- 2
	cInt <- 1
}
