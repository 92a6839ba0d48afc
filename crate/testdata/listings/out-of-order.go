package main

import "fmt"

func work(cInt chan int, cStr chan string) {
	fmt.Println(<-cInt)
	fmt.Println(<-cStr)
}

func main() {
	cInt := make(chan int)
	cStr := make(chan string)
	go work(cInt, cStr)
	cStr <- "hello"
	cInt <- 1
}
